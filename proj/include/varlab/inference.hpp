#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>

#include "varlab/errors.hpp"
#include "varlab/variance_result.hpp"

namespace varlab {

// Variance with its derived dispersion measures. Construction refuses a
// negative variance: that is the upstream cancellation signal this module
// exists to surface, never something to paper over.
struct SummaryStats {
    std::int64_t n = 0;
    double mean = 0.0;
    double variance = 0.0;
    double stddev = 0.0;
    double std_error = 0.0;
};

inline SummaryStats summarize(double variance, double mean, std::int64_t n) {
    if (n < 2) throw InsufficientDataError{};
    if (!std::isfinite(variance) || !std::isfinite(mean))
        throw NonFiniteValueError(std::isfinite(variance) ? mean : variance);
    if (variance < 0.0) throw NegativeVarianceError(variance);
    SummaryStats s;
    s.n = n;
    s.mean = mean;
    s.variance = variance;
    s.stddev = std::sqrt(variance);
    s.std_error = s.stddev / std::sqrt(static_cast<double>(n));
    return s;
}

inline SummaryStats summarize(const VarianceResult& r) {
    return summarize(r.sample_variance, r.mean, r.count);
}

// Variance of a * Agg + b in closed form: a^2 * Var(Agg).
inline double linear_transform_variance(double scale, double offset, double variance) {
    (void)offset;
    if (variance < 0.0) throw NegativeVarianceError(variance);
    return scale * scale * variance;
}

inline double coefficient_of_variation(const SummaryStats& stats) {
    if (stats.mean == 0.0) throw ZeroMeanError{};
    return stats.stddev / stats.mean;
}

namespace detail {

// Continued fraction for the regularized incomplete beta (modified Lentz).
inline double inc_beta_cf(double x, double a, double b) {
    constexpr double tiny = 1e-300;
    constexpr double eps = 1e-15;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 10000; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < eps) return h;
    }
    throw DomainError("incomplete beta continued fraction did not converge");
}

inline double reg_inc_beta(double x, double a, double b) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double log_beta = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
    const double front = std::exp(a * std::log(x) + b * std::log1p(-x) - log_beta);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * inc_beta_cf(x, a, b) / a;
    return 1.0 - front * inc_beta_cf(1.0 - x, b, a) / b;
}

// Two-sided tail mass P(|T_df| > t) for t >= 0.
inline double t_tail_two_sided(double t, double df) {
    return reg_inc_beta(df / (df + t * t), df / 2.0, 0.5);
}

inline double t_pdf(double t, double df) {
    const double log_norm =
        std::lgamma((df + 1.0) / 2.0) - std::lgamma(df / 2.0) - 0.5 * std::log(df * M_PI);
    return std::exp(log_norm - ((df + 1.0) / 2.0) * std::log1p(t * t / df));
}

} // namespace detail

// Two-tailed critical value: the t with P(|T_df| > t) = alpha, found by
// bisection on the tail mass followed by Newton refinement. alpha = 1 is
// the degenerate zero-width tail.
inline double t_quantile(double alpha, std::int64_t df) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("alpha must be in (0, 1]");
    if (df < 1) throw DomainError("degrees of freedom must be >= 1");
    if (alpha == 1.0) return 0.0;
    const double v = static_cast<double>(df);

    double lo = 0.0;
    double hi = 1.0;
    while (detail::t_tail_two_sided(hi, v) > alpha) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e300) throw DomainError("t quantile out of range");
    }
    for (int i = 0; i < 60; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (detail::t_tail_two_sided(mid, v) > alpha) lo = mid; else hi = mid;
    }
    double t = 0.5 * (lo + hi);
    for (int i = 0; i < 8; ++i) {
        const double f = detail::t_tail_two_sided(t, v) - alpha;
        const double step = f / (2.0 * detail::t_pdf(t, v));
        double next = t + step;
        if (next < lo || next > hi) next = 0.5 * (lo + hi);
        if (std::fabs(next - t) <= 1e-13 * std::max(1.0, std::fabs(t))) return next;
        t = next;
    }
    return t;
}

// Critical values from published tables, cross-checked by the test suite at
// startup against the inversion above.
struct TQuantileReference {
    std::int64_t df;
    double alpha;
    double critical;
};

inline constexpr std::array<TQuantileReference, 12> kTQuantileTable = {{
    {1, 0.10, 6.3137515148}, {1, 0.05, 12.7062047364}, {1, 0.01, 63.6567411629},
    {10, 0.10, 1.8124611228}, {10, 0.05, 2.2281388520}, {10, 0.01, 3.1692726726},
    {99, 0.10, 1.6603911560}, {99, 0.05, 1.9842169515}, {99, 0.01, 2.6264054573},
    {1000, 0.10, 1.6463788173}, {1000, 0.05, 1.9623390808}, {1000, 0.01, 2.5807546981},
}};

inline double t_quantile_table_max_error() {
    double worst = 0.0;
    for (const TQuantileReference& ref : kTQuantileTable)
        worst = std::max(worst, std::fabs(t_quantile(ref.alpha, ref.df) - ref.critical));
    return worst;
}

inline double confidence_half_width(const SummaryStats& stats, double alpha) {
    if (stats.n < 2) throw InsufficientDataError{};
    return t_quantile(alpha, stats.n - 1) * stats.std_error;
}

enum class TTestFailure { None, LoudZeroStddev };

// One-sample two-tailed t-test. The acceptance interval is the range of
// hypothesized means the test would not reject: mean -+ critical * stderr.
struct TTestResult {
    double t_statistic = 0.0;
    double critical_value = 0.0;
    bool reject = false;
    std::pair<double, double> acceptance_interval{0.0, 0.0};
    TTestFailure failure_mode = TTestFailure::None;
};

inline TTestResult one_sample_ttest(const SummaryStats& stats, double mu0, double alpha) {
    if (stats.n < 2) throw InsufficientDataError{};
    TTestResult r;
    r.critical_value = t_quantile(alpha, stats.n - 1);
    if (stats.std_error == 0.0) {
        // Zero stddev collapses the interval to a point; with mean != mu0 the
        // statistic is undefined and the test fails loudly.
        r.acceptance_interval = {stats.mean, stats.mean};
        if (stats.mean == mu0) {
            r.t_statistic = 0.0;
            r.reject = false;
        } else {
            r.t_statistic = std::copysign(std::numeric_limits<double>::infinity(),
                                          stats.mean - mu0);
            r.reject = true;
            r.failure_mode = TTestFailure::LoudZeroStddev;
        }
        return r;
    }
    r.t_statistic = (stats.mean - mu0) / stats.std_error;
    r.reject = std::fabs(r.t_statistic) > r.critical_value;
    const double half_width = r.critical_value * stats.std_error;
    r.acceptance_interval = {stats.mean - half_width, stats.mean + half_width};
    return r;
}

} // namespace varlab
