#pragma once

#include <cstdint>
#include <span>

#include "varlab/errors.hpp"
#include "varlab/variance_result.hpp"

namespace varlab {

// Incremental mean/S recurrence, one point per step:
//   M_j = M_{j-1} + (x - M_{j-1})/j
//   S_j = S_{j-1} + (j-1) * (x - M_{j-1}) * ((x - M_{j-1})/j)
// The j = 1 step falls out of the same expressions (M = x, S = 0), so the
// update is branch-free. There is no merge: this state only ever absorbs a
// single point at a time.
struct WelfordState {
    std::int64_t count = 0;
    double mean = 0.0;
    double s = 0.0;

    void push(double x) {
        require_finite(x);
        const double j = static_cast<double>(++count);
        const double d = x - mean;
        mean += d / j;
        s += (j - 1.0) * d * (d / j);
    }

    VarianceResult finalize() const { return make_variance_result(count, mean, s, false); }
};

inline WelfordState updating_wwh_push(WelfordState state, double x) {
    state.push(x);
    return state;
}

inline VarianceResult updating_wwh(std::span<const double> data) {
    WelfordState state;
    for (double x : data) state.push(x);
    return state.finalize();
}

} // namespace varlab
