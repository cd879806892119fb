#pragma once

#include <vector>

namespace bose {

/// Dickman density p = e^{-gamma} rho_Dickman, the probability density with
/// Laplace transform exp(-int_0^1 (1 - e^{-s x}) / x dx).
///
/// Closed form on [0, 2]; beyond 2 the delay equation x p'(x) = -p(x - 1) is
/// integrated by trapezoid steps of h and h/2 combined by Richardson
/// extrapolation, and values between nodes use cubic Hermite interpolation.
class DickmanDensity {
 public:
  explicit DickmanDensity(double h = 1e-4, double x_max = 24.0);

  /// p(x) for x >= 0 (0 beyond x_max); throws std::domain_error for x < 0.
  double operator()(double x) const;
  double h() const { return h_; }
  double x_max() const { return x_max_; }

  /// int_0^{x_max} e^{-s x} p(x) dx by Simpson's rule on the node grid.
  double laplace_transform(double s) const;

  /// Shared instance with default parameters.
  static const DickmanDensity& instance();

 private:
  double h_;
  double x_max_;
  std::vector<double> table_;  // nodes on [1, x_max] (index 0 at x = 1)
};

/// Convenience: DickmanDensity::instance()(x).
double dickman_p(double x);

/// exp(-int_0^1 (1 - e^{-s x}) / x dx) from the exponential integral.
double dickman_laplace_closed_form(double s);

}  // namespace bose
