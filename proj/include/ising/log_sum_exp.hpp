#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>

namespace ising {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log(exp(a) + exp(b)); either argument may be -inf.
inline double log_add(double a, double b) {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    const double hi = std::max(a, b);
    return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

inline double log_sum_exp(std::span<const double> xs) {
    double hi = kNegInf;
    for (double x : xs) hi = std::max(hi, x);
    if (hi == kNegInf) return kNegInf;
    double sum = 0.0;
    for (double x : xs) sum += std::exp(x - hi);
    return hi + std::log(sum);
}

// tanh((lp - lm) / 2): the magnetization of a spin whose +1 / -1 weights are exp(lp), exp(lm).
inline double spin_mean_from_logs(double log_plus, double log_minus) {
    if (log_plus == kNegInf && log_minus == kNegInf) return std::numeric_limits<double>::quiet_NaN();
    if (log_minus == kNegInf) return 1.0;
    if (log_plus == kNegInf) return -1.0;
    return std::tanh(0.5 * (log_plus - log_minus));
}

// 1 - tanh(x) without cancellation for large x.
inline double one_minus_tanh(double x) {
    if (x == std::numeric_limits<double>::infinity()) return 0.0;
    return 2.0 / (1.0 + std::exp(2.0 * x));
}

// atanh clamped to +-max_value once |x| >= 1 - 1e-15.
inline double saturating_atanh(double x, double max_value = 40.0) {
    if (x >= 1.0 - 1e-15) return max_value;
    if (x <= -1.0 + 1e-15) return -max_value;
    return std::atanh(x);
}

}  // namespace ising
