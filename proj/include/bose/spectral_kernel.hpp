#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "bose/geometry.hpp"

namespace bose {

/// Thrown when a requested tolerance cannot be met within the term budget.
class TruncationError : public std::runtime_error {
 public:
  TruncationError(const std::string& what, double achieved)
      : std::runtime_error(what), achieved_(achieved) {}
  double achieved_bound() const { return achieved_; }

 private:
  double achieved_;
};

/// A value together with a rigorous bound on its absolute truncation error.
struct Bounded {
  double value = 0.0;
  double error = 0.0;
};

/// Below this reduced time t = beta k / L^2 the image sum is used, above it
/// the eigenfunction expansion.
inline constexpr double kDualSwitchTime = 0.1;

enum class KernelMethod { Auto, Spectral, Images };

/// Eigen-decomposition of -1/2 d^2/dx^2 on [-1/2, 1/2]; the d-dimensional
/// basis is the tensor product of these 1-D families.
///
/// Modes are grouped into levels of equal eigenvalue. Level n has eigenvalue
/// scale() * key(n), so sums of eigenvalues over axes are exact integers times
/// scale() and can be used as cache keys.
class SpectralBasis {
 public:
  struct Mode {
    double lambda;
    int key;
    int level;
    int component;
  };

  /// Throws std::domain_error for Free.
  SpectralBasis(Boundary bc, int d, double eps = 1e-15, int max_levels = 1 << 16);

  Boundary bc() const { return bc_; }
  int dimension() const { return d_; }
  double eps() const { return eps_; }
  int max_levels() const { return max_levels_; }

  double scale() const;
  int key(int level) const;
  double level_eigenvalue(int level) const { return scale() * key(level); }
  int multiplicity(int level) const;

  /// L^2-normalised component c of the given level at x in [-1/2, 1/2].
  double eigenfunction(int level, int component, double x) const;

  /// Smallest eigenvalue of the d-dimensional operator (pi^2 d / 2 for Dirichlet).
  double lambda1() const { return d_ * level_eigenvalue(0); }
  /// Spectral gap, identical in every dimension.
  double gap() const { return level_eigenvalue(1) - level_eigenvalue(0); }
  /// Ground state of the d-dimensional operator at x in the unit box.
  double phi1(std::span<const double> x) const;

  /// Number of 1-D levels kept at reduced time t: levels n are included until
  /// exp(-t lambda_n) < eps * exp(-t lambda_1) / d. Throws TruncationError
  /// when more than max_levels would be needed.
  int levels_needed(double t) const;

  /// Flattened modes of the first `levels` levels, ascending eigenvalue.
  std::vector<Mode> modes(int levels) const;

 private:
  Boundary bc_;
  int d_;
  double eps_;
  int max_levels_;
};

/// 1-D kernel on the unit interval at reduced time t, with error bound.
Bounded unit_kernel_1d(Boundary bc, double t, double x, double y, double tol,
                       KernelMethod method = KernelMethod::Auto, int max_terms = 100000);

/// log of the 1-D trace sum_n exp(-t lambda_n); `error` is a relative bound.
Bounded unit_log_trace_1d(Boundary bc, double t, double rel_tol, int max_terms = 100000);

/// Heat kernel g_{beta k}(x, y) in the box, within absolute tolerance tol.
/// Throws std::domain_error for points outside the box and TruncationError
/// if tol cannot be reached.
Bounded eval_kernel_bounded(const BoxGeometry& g, double beta, double k, std::span<const double> x,
                            std::span<const double> y, double tol = 1e-12,
                            KernelMethod method = KernelMethod::Auto, int max_terms = 100000);

double eval_kernel(const BoxGeometry& g, double beta, double k, std::span<const double> x,
                   std::span<const double> y, double tol = 1e-12);

struct KernelBoundsRow {
  long k = 0;
  double t = 0.0;                  // beta k / L^2
  double lower_bound_excess = 0.0; // max (main - g) L^d e^{lambda1 t}; literal lower bound holds iff <= 0
  double envelope_violation = 0.0; // max |g - main| - spectral envelope; must be <= 0
  double trace_lower_violation = 0.0;  // e^{-lambda1 t} - t_k relative to e^{-lambda1 t}
  double trace_upper_constant = 0.0;   // (t_k e^{lambda1 t} - 1) e^{gap t}
  double small_k_deviation = 0.0;      // |(2 pi beta k)^{d/2} t_k / |Lambda| - 1|
  double free_domination_constant = 0.0;  // max g / g^free_{beta k / c'} over the grid
};

struct KernelBoundsReport {
  BoxGeometry geometry;
  double beta = 1.0;
  double c_prime = 0.5;
  std::vector<KernelBoundsRow> rows;
  /// Largest violation among the checks that must hold exactly.
  double max_violation = 0.0;
};

/// Numerical check of the kernel/trace bounds on a grid of sample points.
KernelBoundsReport verify_kernel_bounds(const BoxGeometry& g, double beta, std::span<const long> ks,
                                        int grid_per_axis = 4, double c_prime = 0.5);

}  // namespace bose
