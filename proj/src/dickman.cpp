#include "bose/dickman.hpp"

#include <boost/math/special_functions/expint.hpp>
#include <cmath>
#include <stdexcept>

#include "bose/special_functions.hpp"

namespace bose {
namespace {

const double kEmg = std::exp(-kEulerGamma);

// Trapezoid integration of p(x) = p(x - h) - int_{x-h}^x p(u-1)/u du on the
// grid x = 1 + i h, seeded with the closed form on [1, 2].
std::vector<double> integrate(double h, double x_max) {
  const long per_unit = std::lround(1.0 / h);
  const long n = std::lround((x_max - 1.0) / h);
  std::vector<double> p(n + 1);
  auto prev = [&](long i) {  // p(x_i - 1)
    return i < per_unit ? kEmg : p[i - per_unit];
  };
  for (long i = 0; i <= per_unit && i <= n; ++i) p[i] = kEmg * (1.0 - std::log(1.0 + i * h));
  for (long i = per_unit + 1; i <= n; ++i) {
    double x0 = 1.0 + (i - 1) * h, x1 = 1.0 + i * h;
    p[i] = p[i - 1] - 0.5 * h * (prev(i - 1) / x0 + prev(i) / x1);
  }
  return p;
}

}  // namespace

DickmanDensity::DickmanDensity(double h, double x_max) : h_(h), x_max_(x_max) {
  if (!(h > 0.0) || std::abs(1.0 / h - std::round(1.0 / h)) > 1e-9)
    throw std::domain_error("Dickman step must divide 1");
  if (!(x_max > 2.0)) throw std::domain_error("Dickman table must extend beyond 2");
  std::vector<double> coarse = integrate(h, x_max);
  std::vector<double> fine = integrate(0.5 * h, x_max);
  table_.resize(coarse.size());
  for (std::size_t i = 0; i < coarse.size(); ++i) table_[i] = (4.0 * fine[2 * i] - coarse[i]) / 3.0;
}

double DickmanDensity::operator()(double x) const {
  if (x < 0.0 || std::isnan(x)) throw std::domain_error("Dickman density needs x >= 0");
  if (x <= 1.0) return kEmg;
  if (x <= 2.0) return kEmg * (1.0 - std::log(x));
  if (x >= x_max_) return 0.0;
  const double s = (x - 1.0) / h_;
  long i = static_cast<long>(std::floor(s));
  if (i >= static_cast<long>(table_.size()) - 1) i = static_cast<long>(table_.size()) - 2;
  const double t = s - i;
  const double x0 = 1.0 + i * h_, x1 = x0 + h_;
  const double p0 = table_[i], p1 = table_[i + 1];
  // x - 1 lands on a node one unit back
  const long per_unit = std::lround(1.0 / h_);
  auto back = [&](long j) { return j < per_unit ? kEmg : table_[j - per_unit]; };
  const double d0 = -back(i) / x0 * h_, d1 = -back(i + 1) / x1 * h_;
  const double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * p0 + (t3 - 2 * t2 + t) * d0 + (-2 * t3 + 3 * t2) * p1 + (t3 - t2) * d1;
}

double DickmanDensity::laplace_transform(double s) const {
  // [0,1] exactly, then Simpson on the node grid
  double v = s == 0.0 ? kEmg : kEmg * (1.0 - std::exp(-s)) / s;
  const long n = static_cast<long>(table_.size()) - 1;
  const long m = n - (n % 2);
  double acc = 0.0;
  for (long i = 0; i <= m; ++i) {
    double w = (i == 0 || i == m) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    acc += w * table_[i] * std::exp(-s * (1.0 + i * h_));
  }
  return v + acc * h_ / 3.0;
}

const DickmanDensity& DickmanDensity::instance() {
  static const DickmanDensity d;
  return d;
}

double dickman_p(double x) { return DickmanDensity::instance()(x); }

double dickman_laplace_closed_form(double s) {
  if (s < 0.0) throw std::domain_error("Laplace variable must be >= 0");
  if (s == 0.0) return 1.0;
  // int_0^1 (1 - e^{-sx})/x dx = gamma + ln s + E_1(s)
  return std::exp(-(kEulerGamma + std::log(s) + boost::math::expint(1, s)));
}

}  // namespace bose
