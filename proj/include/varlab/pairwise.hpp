#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "varlab/errors.hpp"
#include "varlab/variance_result.hpp"
#include "varlab/welford.hpp"

namespace varlab {

// Mergeable segment summary: point count, segment total T and sum of squared
// deviations S from the segment mean. Either side of a merge may be empty.
struct PairState {
    std::int64_t count = 0;
    double total = 0.0;
    double s = 0.0;
};

inline PairState pair_state_from_value(double x) {
    require_finite(x);
    return {1, x, 0.0};
}

// Combines two adjacent segments:
//   T = T_a + T_b
//   S = S_a + S_b + m/(n(m+n)) * ((n/m) T_a - T_b)^2
// with m, n the segment counts. The added term is a square, so S never
// decreases. Commutative in exact arithmetic.
inline PairState pair_merge(const PairState& a, const PairState& b) {
    if (a.count == 0) return b;
    if (b.count == 0) return a;
    const double m = static_cast<double>(a.count);
    const double n = static_cast<double>(b.count);
    const double diff = (n / m) * a.total - b.total;
    PairState out;
    out.count = a.count + b.count;
    out.total = a.total + b.total;
    out.s = a.s + b.s + (m / (n * (m + n))) * (diff * diff);
    return out;
}

// Youngs-Cramer single-point update of a PairState:
//   T_j = T_{j-1} + x
//   S_j = S_{j-1} + (j x - T_j)^2 / (j (j-1))   for j >= 2
// The j = 1 step only sets T.
inline PairState updating_yc_push(PairState state, double x) {
    require_finite(x);
    const double j = static_cast<double>(state.count + 1);
    state.total += x;
    if (state.count >= 1) {
        const double term = j * x - state.total;
        state.s += (term * term) / (j * (j - 1.0));
    }
    state.count += 1;
    return state;
}

inline VarianceResult updating_yc(std::span<const double> data) {
    PairState state;
    for (double x : data) state = updating_yc_push(state, x);
    if (state.count == 0) throw EmptyInputError{};
    const double mean = state.total / static_cast<double>(state.count);
    return make_variance_result(state.count, mean, state.s, false);
}

inline constexpr std::size_t kDefaultBaseBlock = 128;

// Streaming pairwise reduction in O(log N) space. Points accumulate in a
// tail block (total tracked directly, S via the Welford recurrence); full
// blocks carry upward binary-counter style, so slot k always holds exactly
// base_block * 2^k points and equal-sized blocks merge with pair_merge.
class PairwiseStream {
public:
    explicit PairwiseStream(std::size_t base_block = kDefaultBaseBlock)
        : base_block_(base_block) {
        if (base_block_ == 0) throw DomainError("pairwise base block must be positive");
    }

    void push(double x) {
        tail_.push(x);
        tail_total_ += x;
        if (static_cast<std::size_t>(tail_.count) == base_block_) seal_tail();
    }

    std::int64_t count() const {
        std::int64_t n = tail_.count;
        for (const auto& level : levels_)
            if (level) n += level->count;
        return n;
    }

    std::size_t base_block() const { return base_block_; }

    // Merges the tail and all occupied levels, smallest block first.
    PairState collapse() const {
        PairState acc{tail_.count, tail_total_, tail_.s};
        for (const auto& level : levels_)
            if (level) acc = pair_merge(*level, acc);
        return acc;
    }

    VarianceResult finalize() const {
        const PairState acc = collapse();
        if (acc.count == 0) throw EmptyInputError{};
        const double mean = acc.total / static_cast<double>(acc.count);
        return make_variance_result(acc.count, mean, acc.s, false);
    }

private:
    void seal_tail() {
        PairState block{tail_.count, tail_total_, tail_.s};
        tail_ = WelfordState{};
        tail_total_ = 0.0;
        for (std::size_t k = 0;; ++k) {
            if (k == levels_.size()) {
                levels_.push_back(block);
                return;
            }
            if (!levels_[k]) {
                levels_[k] = block;
                return;
            }
            block = pair_merge(*levels_[k], block);
            levels_[k].reset();
        }
    }

    std::size_t base_block_;
    std::vector<std::optional<PairState>> levels_;
    WelfordState tail_;
    double tail_total_ = 0.0;
};

inline VarianceResult pairwise_updating(std::span<const double> data,
                                        std::size_t base_block = kDefaultBaseBlock) {
    PairwiseStream stream(base_block);
    for (double x : data) stream.push(x);
    return stream.finalize();
}

} // namespace varlab
