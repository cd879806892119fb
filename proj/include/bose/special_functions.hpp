#pragma once

#include <span>

namespace bose {

inline constexpr double kEulerGamma = 0.57721566490153286060651209;
inline constexpr double kPi = 3.14159265358979323846264338;

/// Riemann zeta for real s > 1 by Euler-Maclaurin summation with a ten-term
/// Bernoulli tail correction.
double zeta(double s);

/// sum_{k>=1} exp(-a k) k^{-s} for a >= 0. At a = 0 this is zeta(s) and
/// requires s > 1; for a > 0 any real s is accepted.
double exp_weighted_power_sum(double a, double s);

/// log(sum_i exp(v_i)); -inf for an empty span or all -inf entries.
double log_sum_exp(std::span<const double> v);

/// log(exp(a) + exp(b)) without overflow.
double log_add_exp(double a, double b);

}  // namespace bose
