#pragma once

#include <array>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "varlab/moment.hpp"
#include "varlab/pairwise.hpp"
#include "varlab/total_variance.hpp"
#include "varlab/two_pass.hpp"
#include "varlab/welford.hpp"

namespace varlab {

enum class AlgorithmId {
    TwoPass,
    TextbookOnePass,
    ShiftedOnePass,
    PairwiseUpdating,
    UpdatingYC,
    UpdatingWWH,
    TotalVariance,
};

inline constexpr std::array<AlgorithmId, 7> kAllAlgorithms = {
    AlgorithmId::TwoPass,         AlgorithmId::TextbookOnePass, AlgorithmId::ShiftedOnePass,
    AlgorithmId::PairwiseUpdating, AlgorithmId::UpdatingYC,      AlgorithmId::UpdatingWWH,
    AlgorithmId::TotalVariance,
};

// Stable identifiers used in flags and CSV columns.
inline std::string_view algorithm_name(AlgorithmId id) {
    switch (id) {
    case AlgorithmId::TwoPass: return "two-pass";
    case AlgorithmId::TextbookOnePass: return "textbook";
    case AlgorithmId::ShiftedOnePass: return "shifted";
    case AlgorithmId::PairwiseUpdating: return "pairwise";
    case AlgorithmId::UpdatingYC: return "updating-yc";
    case AlgorithmId::UpdatingWWH: return "updating-wwh";
    case AlgorithmId::TotalVariance: return "total-variance";
    }
    return "unknown";
}

// Accepts the stable names plus "updating" as an alias for updating-wwh.
inline std::optional<AlgorithmId> parse_algorithm(std::string_view name) {
    for (AlgorithmId id : kAllAlgorithms)
        if (name == algorithm_name(id)) return id;
    if (name == "updating") return AlgorithmId::UpdatingWWH;
    return std::nullopt;
}

// Knobs shared by the sequential and parallel drivers.
struct RunOptions {
    bool clamp_negative = false;
    bool compensated = false;
    ShiftPolicy shift_policy = ShiftPolicy::prefix_mean();
    std::size_t base_block = kDefaultBaseBlock;
    std::size_t group_size = 10;
    AlgorithmId group_inner = AlgorithmId::UpdatingWWH;
};

VarianceResult run_algorithm(std::span<const double> data, AlgorithmId id,
                             const RunOptions& opts);

// Reduces one group to (n, mean, variance) with the chosen inner algorithm.
// A single point summarizes to variance 0 by convention.
inline GroupSummary group_summarize(std::span<const double> data,
                                    AlgorithmId inner = AlgorithmId::UpdatingWWH,
                                    const RunOptions& opts = {}) {
    if (data.empty()) throw EmptyInputError{};
    if (inner == AlgorithmId::TotalVariance)
        throw DomainError("total-variance cannot be its own group-level algorithm");
    if (data.size() == 1) return {1, require_finite(data[0]), 0.0};
    const VarianceResult r = run_algorithm(data, inner, opts);
    return {r.count, r.mean, r.sample_variance};
}

// Partitions data into consecutive groups of group_size (last may be short),
// summarizes each, and combines with total_variance.
inline VarianceResult grouped_variance(std::span<const double> data, std::size_t group_size,
                                       AlgorithmId inner = AlgorithmId::UpdatingWWH,
                                       const RunOptions& opts = {}) {
    if (group_size == 0) throw DomainError("group size must be positive");
    if (data.empty()) throw EmptyInputError{};
    std::vector<GroupSummary> groups;
    groups.reserve(data.size() / group_size + 1);
    for (std::size_t begin = 0; begin < data.size(); begin += group_size) {
        const std::size_t len = std::min(group_size, data.size() - begin);
        groups.push_back(group_summarize(data.subspan(begin, len), inner, opts));
    }
    return total_variance(groups);
}

inline VarianceResult run_algorithm(std::span<const double> data, AlgorithmId id,
                                    const RunOptions& opts = {}) {
    switch (id) {
    case AlgorithmId::TwoPass: return two_pass(data, opts.compensated);
    case AlgorithmId::TextbookOnePass:
        return textbook_one_pass(data, opts.clamp_negative, opts.compensated);
    case AlgorithmId::ShiftedOnePass:
        return shifted_one_pass(data, opts.shift_policy, opts.compensated);
    case AlgorithmId::PairwiseUpdating: return pairwise_updating(data, opts.base_block);
    case AlgorithmId::UpdatingYC: return updating_yc(data);
    case AlgorithmId::UpdatingWWH: return updating_wwh(data);
    case AlgorithmId::TotalVariance:
        return grouped_variance(data, opts.group_size, opts.group_inner, opts);
    }
    throw DomainError("unknown algorithm");
}

} // namespace varlab
