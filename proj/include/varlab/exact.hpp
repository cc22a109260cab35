#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "varlab/errors.hpp"
#include "varlab/variance_result.hpp"

namespace varlab {

namespace mp = boost::multiprecision;

// Arbitrary-precision rational. Finite doubles are dyadic, so they convert
// exactly and reference results carry no rounding of their own. Kept in
// lowest terms with a positive denominator by the backing representation.
class ExactRational {
public:
    ExactRational() = default;
    ExactRational(std::int64_t n) : v_(n) {} // NOLINT: implicit integer lift is intended
    ExactRational(std::int64_t num, std::int64_t den) : v_(num, den) {}
    explicit ExactRational(mp::cpp_rational v) : v_(std::move(v)) {}

    static ExactRational from_double(double x) {
        if (!std::isfinite(x)) throw NonFiniteValueError(x);
        return ExactRational(mp::cpp_rational(x));
    }

    const mp::cpp_rational& value() const { return v_; }
    bool is_zero() const { return v_.is_zero(); }
    int sign() const { return v_.sign(); }

    ExactRational abs() const { return v_ < 0 ? ExactRational(mp::cpp_rational(-v_)) : *this; }

    friend ExactRational operator+(const ExactRational& a, const ExactRational& b) {
        return ExactRational(mp::cpp_rational(a.v_ + b.v_));
    }
    friend ExactRational operator-(const ExactRational& a, const ExactRational& b) {
        return ExactRational(mp::cpp_rational(a.v_ - b.v_));
    }
    friend ExactRational operator*(const ExactRational& a, const ExactRational& b) {
        return ExactRational(mp::cpp_rational(a.v_ * b.v_));
    }
    friend ExactRational operator/(const ExactRational& a, const ExactRational& b) {
        if (b.is_zero()) throw DomainError("rational division by zero");
        return ExactRational(mp::cpp_rational(a.v_ / b.v_));
    }
    ExactRational operator-() const { return ExactRational(mp::cpp_rational(-v_)); }
    ExactRational& operator+=(const ExactRational& o) { v_ += o.v_; return *this; }
    ExactRational& operator-=(const ExactRational& o) { v_ -= o.v_; return *this; }
    ExactRational& operator*=(const ExactRational& o) { v_ *= o.v_; return *this; }

    friend bool operator==(const ExactRational& a, const ExactRational& b) { return a.v_ == b.v_; }
    friend bool operator!=(const ExactRational& a, const ExactRational& b) { return a.v_ != b.v_; }
    friend bool operator<(const ExactRational& a, const ExactRational& b) { return a.v_ < b.v_; }
    friend bool operator<=(const ExactRational& a, const ExactRational& b) { return a.v_ <= b.v_; }
    friend bool operator>(const ExactRational& a, const ExactRational& b) { return a.v_ > b.v_; }
    friend bool operator>=(const ExactRational& a, const ExactRational& b) { return a.v_ >= b.v_; }

    // Nearest-double conversion via a 53-bit integer quotient. Avoids the
    // naive numerator/denominator-to-double route, which overflows once the
    // integers pass 2^1024.
    double to_double() const {
        using mp::cpp_int;
        if (v_.is_zero()) return 0.0;
        cpp_int a = mp::numerator(v_);
        const bool negative = a < 0;
        if (negative) a = -a;
        const cpp_int& b = mp::denominator(v_);
        const long k = static_cast<long>(mp::msb(a)) - static_cast<long>(mp::msb(b));
        const long sh = 53 - k;
        cpp_int num = a;
        cpp_int den = b;
        if (sh >= 0) num <<= static_cast<unsigned>(sh); else den <<= static_cast<unsigned>(-sh);
        cpp_int q, r;
        mp::divide_qr(num, den, q, r);
        if (2 * r >= den) ++q;
        const double mag = std::ldexp(q.convert_to<double>(), static_cast<int>(-sh));
        return negative ? -mag : mag;
    }

    // Scientific-notation decimal with the given number of significant
    // digits, rounded half-up. Example: 1/12 -> "8.33...3e-02".
    std::string to_decimal(int significant_digits = 30) const {
        using mp::cpp_int;
        if (significant_digits < 1) throw DomainError("significant_digits must be >= 1");
        if (v_.is_zero()) return "0";
        cpp_int a = mp::numerator(v_);
        const bool negative = a < 0;
        if (negative) a = -a;
        const cpp_int b = mp::denominator(v_);

        // Decimal exponent: largest e with |v| >= 10^e, seeded from the bit
        // lengths and corrected by comparison.
        auto pow10 = [](long p) {
            cpp_int r = mp::pow(cpp_int(10), static_cast<unsigned>(p));
            return r;
        };
        auto at_least_pow10 = [&](long e) {
            return e >= 0 ? a >= b * pow10(e) : a * pow10(-e) >= b;
        };
        long e10 = static_cast<long>(
            std::floor((static_cast<double>(mp::msb(a)) - static_cast<double>(mp::msb(b))) *
                       0.30102999566398119));
        while (at_least_pow10(e10 + 1)) ++e10;
        while (!at_least_pow10(e10)) --e10;

        // First significant_digits digits of |v|, rounded half-up.
        const long scale = significant_digits - 1 - e10;
        cpp_int num = a;
        cpp_int den = b;
        if (scale >= 0) num *= pow10(scale); else den *= pow10(-scale);
        cpp_int digits = (2 * num + den) / (2 * den);
        if (digits >= pow10(significant_digits)) { // rounding carried to an extra digit
            digits /= 10;
            ++e10;
        }

        std::string ds = digits.str();
        std::string out = negative ? "-" : "";
        out += ds.substr(0, 1);
        if (significant_digits > 1) out += "." + ds.substr(1);
        out += (e10 < 0 ? "e-" : "e+");
        const long ae = e10 < 0 ? -e10 : e10;
        if (ae < 10) out += "0";
        out += std::to_string(ae);
        return out;
    }

private:
    mp::cpp_rational v_;
};

namespace detail {

// Decomposes x exactly as m * 2^e with |m| < 2^53.
struct Dyadic {
    std::int64_t mantissa;
    int exponent;
};

inline Dyadic decompose(double x) {
    require_finite(x);
    if (x == 0.0) return {0, 0};
    int e = 0;
    const double f = std::frexp(x, &e); // x = f * 2^e, |f| in [0.5, 1)
    return {static_cast<std::int64_t>(std::ldexp(f, 53)), e - 53};
}

} // namespace detail

// Exact S = sum(x^2) - (sum x)^2 / N over the stored binary values. Every
// variance formula coincides with this in exact arithmetic. Internally the
// mantissas are rescaled to a common power of two so the whole accumulation
// runs in big integers; the one division by N happens symbolically at the end.
inline ExactRational exact_sum_sq_dev(std::span<const double> data) {
    using mp::cpp_int;
    if (data.empty()) throw EmptyInputError{};
    if (data.size() == 1) throw InsufficientDataError{};

    std::vector<detail::Dyadic> parts;
    parts.reserve(data.size());
    int e_min = 0;
    bool any_nonzero = false;
    for (double x : data) {
        const detail::Dyadic d = detail::decompose(x);
        if (d.mantissa != 0 && (!any_nonzero || d.exponent < e_min)) {
            e_min = d.exponent;
            any_nonzero = true;
        }
        parts.push_back(d);
    }

    const auto n = static_cast<std::int64_t>(data.size());
    cpp_int linear = 0;
    cpp_int quadratic = 0;
    cpp_int scaled;
    for (const detail::Dyadic& d : parts) {
        if (d.mantissa == 0) continue;
        scaled = d.mantissa;
        scaled <<= static_cast<unsigned>(d.exponent - e_min);
        linear += scaled;
        quadratic += scaled * scaled;
    }

    cpp_int num = cpp_int(n) * quadratic - linear * linear;
    cpp_int den = n;
    const long e2 = 2L * e_min;
    if (e2 >= 0) num <<= static_cast<unsigned>(e2); else den <<= static_cast<unsigned>(-e2);
    return ExactRational(mp::cpp_rational(num, den));
}

inline ExactRational exact_variance(std::span<const double> data) {
    const auto n = static_cast<std::int64_t>(data.size());
    return exact_sum_sq_dev(data) / ExactRational(n - 1);
}

// Independent second route for cross-checking the oracle: rational mean,
// then rational sum of squared deviations. O(N) rational operations, so
// intended for test-sized inputs.
inline ExactRational exact_sum_sq_dev_two_pass(std::span<const double> data) {
    if (data.empty()) throw EmptyInputError{};
    if (data.size() == 1) throw InsufficientDataError{};
    ExactRational sum;
    for (double x : data) sum += ExactRational::from_double(x);
    const ExactRational mean = sum / ExactRational(static_cast<std::int64_t>(data.size()));
    ExactRational s;
    for (double x : data) {
        const ExactRational d = ExactRational::from_double(x) - mean;
        s += d * d;
    }
    return s;
}

// --- rational mirrors of the mergeable representations -------------------
//
// Same recurrences as the floating-point states, evaluated in rationals.
// Used to check the algebraic identities (merge associativity, the
// grouped-variance decomposition) exactly.

struct ExactPairState {
    std::int64_t count = 0;
    ExactRational total;
    ExactRational s;
};

inline ExactPairState exact_pair_from_value(double x) {
    return {1, ExactRational::from_double(x), ExactRational()};
}

inline ExactPairState exact_pair_merge(const ExactPairState& a, const ExactPairState& b) {
    if (a.count == 0) return b;
    if (b.count == 0) return a;
    const ExactRational m(a.count);
    const ExactRational n(b.count);
    const ExactRational diff = (n / m) * a.total - b.total;
    ExactPairState out;
    out.count = a.count + b.count;
    out.total = a.total + b.total;
    out.s = a.s + b.s + (m / (n * (m + n))) * (diff * diff);
    return out;
}

// Segment summary built directly from the exact definition.
inline ExactPairState exact_pair_batch(std::span<const double> data) {
    if (data.empty()) return {};
    if (data.size() == 1) return exact_pair_from_value(data[0]);
    ExactRational total;
    for (double x : data) total += ExactRational::from_double(x);
    return {static_cast<std::int64_t>(data.size()), total, exact_sum_sq_dev(data)};
}

struct ExactGroupSummary {
    std::int64_t n = 0;
    ExactRational mean;
    ExactRational variance;
};

inline ExactGroupSummary exact_group_summarize(std::span<const double> data) {
    if (data.empty()) throw EmptyInputError{};
    ExactRational sum;
    for (double x : data) sum += ExactRational::from_double(x);
    const auto n = static_cast<std::int64_t>(data.size());
    const ExactRational mean = sum / ExactRational(n);
    if (n == 1) return {1, mean, ExactRational()};
    return {n, mean, exact_variance(data)};
}

// Rational within/between decomposition; returns the sample variance.
inline ExactRational exact_total_variance(std::span<const ExactGroupSummary> groups) {
    if (groups.empty()) throw EmptyInputError{};
    std::int64_t n_total = 0;
    ExactRational weighted_sum;
    for (const ExactGroupSummary& g : groups) {
        n_total += g.n;
        weighted_sum += ExactRational(g.n) * g.mean;
    }
    if (n_total < 2) throw InsufficientDataError{};
    const ExactRational grand_mean = weighted_sum / ExactRational(n_total);
    ExactRational s;
    for (const ExactGroupSummary& g : groups) {
        const ExactRational d = g.mean - grand_mean;
        s += ExactRational(g.n) * d * d + ExactRational(g.n - 1) * g.variance;
    }
    return s / ExactRational(n_total - 1);
}

} // namespace varlab
