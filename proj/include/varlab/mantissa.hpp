#pragma once

#include <bit>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "varlab/dataset.hpp"
#include "varlab/moment.hpp"

namespace varlab {

// The 52-bit fraction field of a double as "0x" + 13 lowercase hex digits.
inline std::string fraction_hex(double x) {
    const auto bits = std::bit_cast<std::uint64_t>(x);
    char buf[18];
    std::snprintf(buf, sizeof buf, "0x%013llx",
                  static_cast<unsigned long long>(bits & ((std::uint64_t{1} << 52) - 1)));
    return buf;
}

// One row of the cancellation inspector: the fraction bits of the two
// single-pass terms S1 and S2, their difference S, and the variance it
// yields. As the shift grows the two fraction fields agree in more and more
// leading bits until the subtraction has nothing left.
struct MantissaRow {
    std::optional<int> shift_exponent;
    std::string s1_mantissa;
    std::string s2_mantissa;
    double s = 0.0;
    double variance = 0.0;
};

inline MantissaRow mantissa_row(std::span<const double> data, std::optional<int> shift_exponent) {
    MomentState state(0.0);
    if (shift_exponent) {
        const double shift = pow10_int(*shift_exponent);
        for (double x : data) state.add(x + shift);
    } else {
        for (double x : data) state.add(x);
    }
    const auto [s1, s2] = state.cancellation_terms();
    const VarianceResult r = state.finalize(false);
    return {shift_exponent, fraction_hex(s1), fraction_hex(s2), r.sum_sq_dev, r.sample_variance};
}

// Unshifted row first, then one row per requested shift exponent.
inline std::vector<MantissaRow> mantissa_table(std::span<const double> data,
                                               std::span<const int> shift_exponents) {
    std::vector<MantissaRow> rows;
    rows.reserve(shift_exponents.size() + 1);
    rows.push_back(mantissa_row(data, std::nullopt));
    for (int e : shift_exponents) rows.push_back(mantissa_row(data, e));
    return rows;
}

} // namespace varlab
