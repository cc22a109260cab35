#pragma once

#include <utility>

namespace varlab {

// One Kahan step: folds x into (sum, carry) and returns the new pair.
// The carry holds the rounding error of the addition and is subtracted
// from the next summand.
inline std::pair<double, double> compensated_add(double sum, double carry, double x) {
    const double y = x - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    return {t, carry};
}

// Running sum with opt-in compensation. When compensation is off this is a
// plain left-to-right sum and the carry stays exactly 0.
class CompensatedSum {
public:
    CompensatedSum() = default;
    explicit CompensatedSum(bool compensated) : compensated_(compensated) {}

    void add(double x) {
        if (compensated_) {
            const auto [s, c] = compensated_add(sum_, carry_, x);
            sum_ = s;
            carry_ = c;
        } else {
            sum_ += x;
        }
    }

    // Folds another accumulator in: its sum, then the negated carry so the
    // error it tracked is not lost.
    void absorb(const CompensatedSum& other) {
        if (compensated_) {
            add(other.sum_);
            add(-other.carry_);
        } else {
            sum_ += other.sum_;
        }
    }

    double value() const { return sum_; }
    double carry() const { return carry_; }
    bool compensated() const { return compensated_; }

private:
    double sum_ = 0.0;
    double carry_ = 0.0;
    bool compensated_ = false;
};

} // namespace varlab
