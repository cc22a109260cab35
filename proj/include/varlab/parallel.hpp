#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <span>
#include <thread>
#include <vector>

#include "varlab/algorithms.hpp"

namespace varlab {

struct ChunkRange {
    std::size_t begin = 0;
    std::size_t end = 0;
    std::size_t size() const { return end - begin; }
};

// Contiguous, disjoint ranges covering [0, n) in ascending order. The plan,
// not the scheduler, fixes the combination order, so results depend only on
// (data, algorithm, plan).
struct ChunkPlan {
    std::vector<ChunkRange> ranges;
    unsigned workers = 1;
};

inline ChunkPlan plan_chunks(std::size_t n, unsigned workers) {
    if (workers == 0) throw DomainError("worker count must be positive");
    ChunkPlan plan;
    plan.workers = workers;
    if (n == 0) return plan;
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t begin = 0; begin < n; begin += chunk)
        plan.ranges.push_back({begin, begin + std::min(chunk, n - begin)});
    return plan;
}

inline bool parallelizable(AlgorithmId id) {
    switch (id) {
    case AlgorithmId::UpdatingYC:
    case AlgorithmId::UpdatingWWH:
        return false;
    default:
        return true;
    }
}

namespace detail {

// Runs fn over every chunk on its own thread and returns the partial
// results in chunk order. Worker exceptions are rethrown here, lowest
// chunk first.
template <typename Partial, typename Fn>
std::vector<Partial> map_chunks(const ChunkPlan& plan, Fn&& fn) {
    const std::size_t k = plan.ranges.size();
    std::vector<Partial> partials(k);
    std::vector<std::exception_ptr> errors(k);
    if (k <= 1) {
        if (k == 1) partials[0] = fn(plan.ranges[0]);
        return partials;
    }
    std::vector<std::thread> threads;
    threads.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        threads.emplace_back([&, i] {
            try {
                partials[i] = fn(plan.ranges[i]);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        });
    }
    for (auto& t : threads) t.join();
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    return partials;
}

} // namespace detail

// Chunked execution of the mergeable algorithms: every worker reduces its
// range to a partial state, partials combine left to right by chunk index.
// A one-chunk plan reproduces the sequential algorithm bit for bit.
inline VarianceResult parallel_variance(std::span<const double> data, AlgorithmId id,
                                        const ChunkPlan& plan, const RunOptions& opts = {}) {
    if (!parallelizable(id))
        throw UnsupportedParallelAlgorithmError(std::string(algorithm_name(id)));
    if (data.empty()) throw EmptyInputError{};
    if (data.size() == 1) throw InsufficientDataError{};
    if (plan.ranges.empty() || plan.ranges.back().end != data.size() || plan.ranges.front().begin != 0)
        throw DomainError("chunk plan does not cover the data");

    const auto chunk_of = [&](const ChunkRange& r) { return data.subspan(r.begin, r.size()); };
    const auto n = static_cast<std::int64_t>(data.size());

    switch (id) {
    case AlgorithmId::TwoPass: {
        auto sums = detail::map_chunks<double>(plan, [&](const ChunkRange& r) {
            CompensatedSum s(opts.compensated);
            for (double x : chunk_of(r)) s.add(require_finite(x));
            return s.value();
        });
        double total = 0.0;
        for (double s : sums) total += s;
        const double mean = total / static_cast<double>(n);
        auto sqs = detail::map_chunks<double>(plan, [&](const ChunkRange& r) {
            CompensatedSum s(opts.compensated);
            for (double x : chunk_of(r)) {
                const double d = x - mean;
                s.add(d * d);
            }
            return s.value();
        });
        double sum_sq = 0.0;
        for (double s : sqs) sum_sq += s;
        return make_variance_result(n, mean, sum_sq, false);
    }

    case AlgorithmId::TextbookOnePass:
    case AlgorithmId::ShiftedOnePass: {
        const double shift =
            id == AlgorithmId::ShiftedOnePass ? opts.shift_policy.resolve(data) : 0.0;
        auto partials = detail::map_chunks<MomentState>(plan, [&](const ChunkRange& r) {
            MomentState state(shift, opts.compensated);
            for (double x : chunk_of(r)) state.add(x);
            return state;
        });
        MomentState combined = partials.front();
        for (std::size_t i = 1; i < partials.size(); ++i) combined.merge(partials[i]);
        return combined.finalize(id == AlgorithmId::TextbookOnePass && opts.clamp_negative);
    }

    case AlgorithmId::PairwiseUpdating: {
        auto partials = detail::map_chunks<PairState>(plan, [&](const ChunkRange& r) {
            PairwiseStream stream(opts.base_block);
            for (double x : chunk_of(r)) stream.push(x);
            return stream.collapse();
        });
        PairState combined = partials.front();
        for (std::size_t i = 1; i < partials.size(); ++i)
            combined = pair_merge(combined, partials[i]);
        const double mean = combined.total / static_cast<double>(combined.count);
        return make_variance_result(combined.count, mean, combined.s, false);
    }

    case AlgorithmId::TotalVariance: {
        // Chunks act as the groups; within-chunk sub-grouping stays a
        // sequential knob.
        auto partials = detail::map_chunks<GroupSummary>(plan, [&](const ChunkRange& r) {
            return group_summarize(chunk_of(r), opts.group_inner, opts);
        });
        return total_variance(partials);
    }

    default:
        throw UnsupportedParallelAlgorithmError(std::string(algorithm_name(id)));
    }
}

} // namespace varlab
