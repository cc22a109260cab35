#pragma once

#include <span>

#include "varlab/compensated.hpp"
#include "varlab/errors.hpp"
#include "varlab/variance_result.hpp"

namespace varlab {

// The definitional formula: first pass for the mean, second pass for
// S = sum((x - mean)^2). Both passes sum left to right; compensation is
// opt-in so the plain formula can be measured as-is.
inline VarianceResult two_pass(std::span<const double> data, bool compensated = false) {
    if (data.empty()) throw EmptyInputError{};
    if (data.size() == 1) throw InsufficientDataError{};

    CompensatedSum sum(compensated);
    for (double x : data) sum.add(require_finite(x));
    const double mean = sum.value() / static_cast<double>(data.size());

    CompensatedSum sq(compensated);
    for (double x : data) {
        const double d = x - mean;
        sq.add(d * d);
    }
    return make_variance_result(static_cast<std::int64_t>(data.size()), mean, sq.value(), false);
}

} // namespace varlab
