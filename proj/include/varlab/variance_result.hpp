#pragma once

#include <cmath>
#include <cstdint>

#include "varlab/errors.hpp"

namespace varlab {

// NaN/Inf would poison every downstream precision measurement, so data
// points are validated once, when they enter an accumulator.
inline double require_finite(double x) {
    if (!std::isfinite(x)) throw NonFiniteValueError(x);
    return x;
}

// Output of every variance algorithm. sum_sq_dev is S, the sum of squared
// deviations from the mean; sample_variance is S/(N-1).
//
// negative_clamped is set only when a raw negative S was replaced by zero
// under an explicit clamping request. The single-pass moment formula is the
// only producer of negative S.
struct VarianceResult {
    std::int64_t count = 0;
    double mean = 0.0;
    double sum_sq_dev = 0.0;
    double sample_variance = 0.0;
    bool negative_clamped = false;
};

inline VarianceResult make_variance_result(std::int64_t count, double mean, double s,
                                           bool clamp_negative) {
    if (count == 0) throw EmptyInputError{};
    if (count == 1) throw InsufficientDataError{};
    VarianceResult r;
    r.count = count;
    r.mean = mean;
    if (s < 0.0 && clamp_negative) {
        r.sum_sq_dev = 0.0;
        r.sample_variance = 0.0;
        r.negative_clamped = true;
    } else {
        r.sum_sq_dev = s;
        r.sample_variance = s / static_cast<double>(count - 1);
    }
    return r;
}

} // namespace varlab
