#pragma once

#include <cmath>
#include <cstdint>
#include <span>

#include "varlab/errors.hpp"
#include "varlab/variance_result.hpp"

namespace varlab {

// Per-group triple consumed by total_variance: count, mean, and sample
// variance (N-1 denominator, 0 by convention for a single point).
struct GroupSummary {
    std::int64_t n = 0;
    double mean = 0.0;
    double variance = 0.0;
};

// Within/between decomposition over group summaries:
//   S = sum n_i (m_i - grand_mean)^2 + sum (n_i - 1) v_i
// One pass finds N and the grand mean, a second accumulates the two terms.
// In exact arithmetic this equals the direct variance of the concatenated
// data, whatever the partition.
inline VarianceResult total_variance(std::span<const GroupSummary> groups) {
    if (groups.empty()) throw EmptyInputError{};

    std::int64_t n_total = 0;
    double weighted_sum = 0.0;
    for (const GroupSummary& g : groups) {
        if (g.n < 1) throw DomainError("group with non-positive count");
        if (!std::isfinite(g.mean) || !std::isfinite(g.variance))
            throw NonFiniteValueError(std::isfinite(g.mean) ? g.variance : g.mean);
        if (g.variance < 0.0) throw NegativeVarianceError(g.variance);
        n_total += g.n;
        weighted_sum += static_cast<double>(g.n) * g.mean;
    }
    if (n_total < 2) throw InsufficientDataError{};
    const double grand_mean = weighted_sum / static_cast<double>(n_total);

    double between = 0.0;
    double within = 0.0;
    for (const GroupSummary& g : groups) {
        const double d = g.mean - grand_mean;
        between += static_cast<double>(g.n) * (d * d);
        within += static_cast<double>(g.n - 1) * g.variance;
    }
    return make_variance_result(n_total, grand_mean, between + within, false);
}

} // namespace varlab
