#include "bose/special_functions.hpp"

#include <boost/math/special_functions/expint.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace bose {
namespace {

// B_{2j} / (2j)! for j = 1..10
constexpr std::array<double, 10> kBernoulliOverFactorial = {
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30240.0,
    -1.0 / 1209600.0,
    1.0 / 47900160.0,
    -691.0 / 1307674368000.0,
    1.0 / 74724249600.0,
    -3617.0 / 10670622842880000.0,
    43867.0 / 5109094217170944000.0,
    -174611.0 / 802857662698291200000.0,
};

constexpr int kEulerMaclaurinCutoff = 24;

// Upper incomplete gamma for any real b and z > 0, via upward recurrence
// from the positive-parameter case.
double upper_incomplete_gamma(double b, double z) {
  if (b > 0.0) return boost::math::tgamma(b, z);
  int steps = static_cast<int>(std::ceil(-b));
  double top = b + steps;
  double g;
  if (top == 0.0) {
    g = boost::math::expint(1, z);
  } else {
    g = boost::math::tgamma(top, z);
  }
  for (int i = steps - 1; i >= 0; --i) {
    double bi = b + i;
    g = (g - std::pow(z, bi) * std::exp(-z)) / bi;
  }
  return g;
}

// m-th derivative of exp(-a x) x^{-s} at x.
double derivative(double a, double s, int m, double x) {
  double sum = 0.0;
  double binom = 1.0;
  double rising = 1.0;  // s (s+1) ... (s+i-1)
  for (int i = 0; i <= m; ++i) {
    double term = binom * std::pow(-a, m - i) * ((i % 2) ? -rising : rising) * std::pow(x, -s - i);
    sum += term;
    binom = binom * (m - i) / (i + 1);
    rising *= (s + i);
  }
  return std::exp(-a * x) * sum;
}

}  // namespace

double zeta(double s) {
  if (!(s > 1.0)) throw std::domain_error("zeta: s must exceed 1");
  return exp_weighted_power_sum(0.0, s);
}

double exp_weighted_power_sum(double a, double s) {
  if (a < 0.0) throw std::domain_error("exp_weighted_power_sum: a must be non-negative");
  if (a == 0.0 && !(s > 1.0)) return std::numeric_limits<double>::infinity();

  if (a >= 0.5) {
    double sum = 0.0;
    for (int k = 1;; ++k) {
      double term = std::exp(-a * k - s * std::log(static_cast<double>(k)));
      sum += term;
      if (term <= 1e-18 * sum && k > 2) break;
    }
    return sum;
  }

  const int K = kEulerMaclaurinCutoff;
  const double x = K;
  double head = 0.0;
  for (int k = 1; k < K; ++k) head += std::exp(-a * k) * std::pow(static_cast<double>(k), -s);

  double integral;
  if (a == 0.0) {
    integral = std::pow(x, 1.0 - s) / (s - 1.0);
  } else {
    // a^{s-1} Gamma(1-s, a K)
    integral = std::pow(a, s - 1.0) * upper_incomplete_gamma(1.0 - s, a * x);
  }

  double tail = integral + 0.5 * std::exp(-a * x) * std::pow(x, -s);
  for (int j = 1; j <= static_cast<int>(kBernoulliOverFactorial.size()); ++j)
    tail -= kBernoulliOverFactorial[j - 1] * derivative(a, s, 2 * j - 1, x);
  return head + tail;
}

double log_sum_exp(std::span<const double> v) {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : v) m = std::max(m, x);
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

double log_add_exp(double a, double b) {
  if (a < b) std::swap(a, b);
  if (b == -std::numeric_limits<double>::infinity()) return a;
  return a + std::log1p(std::exp(b - a));
}

}  // namespace bose
