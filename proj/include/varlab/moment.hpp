#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>

#include "varlab/compensated.hpp"
#include "varlab/errors.hpp"
#include "varlab/variance_result.hpp"

namespace varlab {

// Running moments around a fixed shift: N, sum of (x - shift) and sum of
// (x - shift)^2. With shift 0 these are the textbook single-pass sums whose
// difference S1 - S2 cancels catastrophically when the mean dominates the
// spread. States with equal shift and compensation mode merge by adding
// their sums, which is what the parallel driver relies on.
class MomentState {
public:
    MomentState() = default;
    explicit MomentState(double shift, bool compensated = false)
        : sum_(compensated), sum_sq_(compensated), shift_(shift), compensated_(compensated) {}

    void add(double x) {
        require_finite(x);
        const double d = x - shift_;
        sum_.add(d);
        sum_sq_.add(d * d);
        ++count_;
    }

    void merge(const MomentState& other) {
        if (other.shift_ != shift_ || other.compensated_ != compensated_)
            throw DomainError("moment states with different shift or compensation mode");
        sum_.absorb(other.sum_);
        sum_sq_.absorb(other.sum_sq_);
        count_ += other.count_;
    }

    std::int64_t count() const { return count_; }
    double shift() const { return shift_; }
    double sum() const { return sum_.value(); }
    double sum_sq() const { return sum_sq_.value(); }
    double sum_carry() const { return sum_.carry(); }
    double sum_sq_carry() const { return sum_sq_.carry(); }
    bool compensated() const { return compensated_; }

    // The two nearly-cancelling terms: S1 = sum of squared (shifted) values,
    // S2 = (sum of shifted values)^2 / N. Exposed for the mantissa inspector.
    std::pair<double, double> cancellation_terms() const {
        if (count_ == 0) throw EmptyInputError{};
        const double s1 = sum_sq_.value();
        const double s2 = (sum_.value() * sum_.value()) / static_cast<double>(count_);
        return {s1, s2};
    }

    VarianceResult finalize(bool clamp_negative = false) const {
        if (count_ == 0) throw EmptyInputError{};
        if (count_ == 1) throw InsufficientDataError{};
        const auto [s1, s2] = cancellation_terms();
        const double mean = shift_ + sum_.value() / static_cast<double>(count_);
        return make_variance_result(count_, mean, s1 - s2, clamp_negative);
    }

private:
    std::int64_t count_ = 0;
    CompensatedSum sum_;
    CompensatedSum sum_sq_;
    double shift_ = 0.0;
    bool compensated_ = false;
};

// How shifted_one_pass picks its shift. The prefix mean buffers the first
// min(N, prefix) values so the overall scan still reads the data once.
struct ShiftPolicy {
    enum class Kind { FirstElement, PrefixMean, Explicit };

    Kind kind = Kind::PrefixMean;
    std::size_t prefix = 1000;
    double value = 0.0;

    static ShiftPolicy first_element() { return {Kind::FirstElement, 0, 0.0}; }
    static ShiftPolicy prefix_mean(std::size_t k = 1000) { return {Kind::PrefixMean, k, 0.0}; }
    static ShiftPolicy explicit_shift(double s) { return {Kind::Explicit, 0, s}; }

    double resolve(std::span<const double> data) const {
        switch (kind) {
        case Kind::FirstElement:
            return require_finite(data[0]);
        case Kind::Explicit:
            return require_finite(value);
        case Kind::PrefixMean: {
            const std::size_t m = prefix < data.size() ? prefix : data.size();
            if (m == 0) throw DomainError("prefix-mean shift needs a positive prefix length");
            double sum = 0.0;
            for (std::size_t i = 0; i < m; ++i) sum += require_finite(data[i]);
            return sum / static_cast<double>(m);
        }
        }
        throw DomainError("unknown shift policy");
    }
};

// S = sum(x^2) - (sum(x))^2 / N in one scan. Raw S may come out negative;
// clamping to zero is opt-in so the failure stays visible by default.
inline VarianceResult textbook_one_pass(std::span<const double> data, bool clamp_negative,
                                        bool compensated = false) {
    if (data.empty()) throw EmptyInputError{};
    if (data.size() == 1) throw InsufficientDataError{};
    MomentState state(0.0, compensated);
    for (double x : data) state.add(x);
    return state.finalize(clamp_negative);
}

// Same single-pass sums over data shifted by s, which conditions the
// cancellation away when s lands near the mean. Reported mean is
// s + sum(x - s)/N.
inline VarianceResult shifted_one_pass(std::span<const double> data, const ShiftPolicy& policy,
                                       bool compensated = false) {
    if (data.empty()) throw EmptyInputError{};
    if (data.size() == 1) throw InsufficientDataError{};
    MomentState state(policy.resolve(data), compensated);
    for (double x : data) state.add(x);
    return state.finalize(false);
}

} // namespace varlab
