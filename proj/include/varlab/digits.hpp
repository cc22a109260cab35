#pragma once

#include <cmath>
#include <limits>

#include "varlab/exact.hpp"

namespace varlab {

// Precision score of a computed value against an exact reference:
// digits = -log10(relative error), floored at 0 and capped at 17 (the
// double-precision limit). Reported as a real number so trends stay visible.
struct DigitScore {
    double digits = 0.0;
    double relative_error = std::numeric_limits<double>::infinity();
};

// Zero truth is handled by convention (the reference variance of sampled
// data is never zero in practice): exact zero scores 17, anything else 0.
inline DigitScore correct_digits(double computed, const ExactRational& truth) {
    constexpr double kMaxDigits = 17.0;
    const double inf = std::numeric_limits<double>::infinity();
    if (!std::isfinite(computed)) return {0.0, inf};
    if (truth.is_zero()) {
        if (computed == 0.0) return {kMaxDigits, 0.0};
        return {0.0, inf};
    }
    const ExactRational diff = (ExactRational::from_double(computed) - truth).abs();
    if (diff.is_zero()) return {kMaxDigits, 0.0};
    const double rel = (diff / truth.abs()).to_double();
    if (rel <= 0.0) return {kMaxDigits, rel};
    const double digits = std::min(kMaxDigits, std::max(0.0, -std::log10(rel)));
    return {digits, rel};
}

} // namespace varlab
