#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "bose/geometry.hpp"
#include "bose/rng.hpp"

namespace bose {

struct PDSample {
  std::vector<double> atoms;  // descending
  double residual = 0.0;      // mass left when stick breaking stopped
};

/// Stick breaking with uniform sticks until the residual mass drops below mass_tol.
PDSample sample_pd1(Rng& rng, double mass_tol);
PDSample sample_pd1(std::uint64_t seed, double mass_tol);

/// f^(s)(x) = e^gamma / prod x_i * p((1 - sum x_i) / x_s) on the interior
/// 0 < x_s <= ... <= x_1 < 1, sum x_i < 1; std::domain_error elsewhere.
double pd_marginal_density(std::span<const double> x);

/// CDF of the largest PD(1) atom, F(x) = int_0^x f^(1), by Gauss-Legendre
/// quadrature between the breakpoints 1/(n+1) where f^(1) loses smoothness.
class Pd1LargestCdf {
 public:
  Pd1LargestCdf();
  double operator()(double x) const;
  static const Pd1LargestCdf& instance();

 private:
  std::vector<double> knots_;  // ascending breakpoints in (0, 1]
  std::vector<double> cum_;    // F at knots
};

struct PdRow {
  long N = 0;
  double L = 0.0;
  long samples = 0;
  double ks = 0.0;               // sup |F_emp - F| of L_1 / ((rho - rho_c) |Lambda|)
  double long_mass = 0.0;        // E[N^long] / |Lambda|
  double long_mass_stderr = 0.0;
  double median_l2_over_l1 = 0.0;
  double mean_l1_fraction = 0.0;  // E[L_1] / ((rho - rho_c) |Lambda|)
};

struct PdReport {
  Boundary bc = Boundary::Periodic;
  int d = 3;
  double beta = 1.0, rho = 0.0, rho_c = 0.0;
  std::uint64_t seed = 0;
  std::vector<PdRow> rows;
  /// Bootstrap probability that KS(first N) > KS(last N).
  double ks_confidence = 0.0;
  bool ks_decreasing = false;
  /// |E[N^long]/|Lambda| - (rho - rho_c)| <= 2 stderr at the last N.
  bool mass_within_2sigma = false;
  /// Free bc branch: median L_2/L_1 strictly decreasing along the sequence.
  bool median_ratio_decreasing = false;
};

/// Conditioned loop samples along the N sequence with L = (N / rho)^{1/d}.
/// For free bc only the single-macroscopic-loop statistics are meaningful.
PdReport pd_convergence_test(Boundary bc, int d, double beta, double rho, const std::vector<long>& N_sequence,
                             long samples, std::uint64_t seed, int bootstrap = 1000, int shards = 8);

/// Golomb-Dickman constant E[largest PD(1) atom] = int_0^1 (1 - F(x)) dx.
double golomb_dickman();

}  // namespace bose
