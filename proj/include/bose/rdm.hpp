#pragma once

#include <span>
#include <string>
#include <vector>

#include "bose/partition.hpp"
#include "bose/spectral_kernel.hpp"

namespace bose {

/// gamma_N(x, y) = sum_{r=1}^N g_{r beta}(x, y) Z_{N-r} / Z_N.
class RdmKernel {
 public:
  /// Throws std::out_of_range if the table does not reach N.
  RdmKernel(const PartitionTable& table, long N);

  const BoxGeometry& geometry() const { return geometry_; }
  double beta() const { return beta_; }
  long N() const { return N_; }
  /// w_r = Z_{N-r} / Z_N at index r - 1.
  const std::vector<double>& weights() const { return w_; }
  const std::vector<double>& log_traces() const { return log_t_; }
  /// Index beyond which negligible terms may be dropped: ceil(N^{2/d} ln^2 N).
  long r_cut() const { return r_cut_; }
  /// Upper bound on sup_{x,y} g_{r beta}(x, y).
  double kernel_sup(long r) const;
  /// sum_{r' >= r} w_{r'}.
  double weight_suffix(long r) const { return r > N_ ? 0.0 : suffix_[r - 1]; }

 private:
  BoxGeometry geometry_;
  double beta_;
  long N_;
  long r_cut_;
  std::vector<double> w_;
  std::vector<double> log_t_;
  std::vector<double> suffix_;
};

/// Value with the kernel truncation error and the dropped-tail bound folded in.
Bounded eval_rdm_bounded(const RdmKernel& k, std::span<const double> x, std::span<const double> y);
double eval_rdm(const RdmKernel& k, std::span<const double> x, std::span<const double> y);

/// sum_r w_r t_r, equal to N by the partition recursion.
double rdm_trace_algebraic(const RdmKernel& k);
/// int_Lambda gamma_N(x, x) dx by composite Gauss-Legendre quadrature of the
/// factorised diagonal (each term is a product over axes).
double rdm_trace_quadrature(const RdmKernel& k, int panels = 16);

struct EigenResult {
  double sigma = 0.0;        // Nystrom estimate
  double residual = 0.0;     // ||A v - sigma v|| for the final unit vector
  double lower_bound = 0.0;  // Rayleigh quotient of the sampled ground state
  double continuum = 0.0;    // <f, Gamma f> for f = L^{-d/2} phi_1(x/L); the exact top eigenvalue for spectral bcs
  int grid = 0;
  int iterations = 0;
  bool converged = false;
};

/// Nystrom discretisation on grid^d midpoints plus power iteration to
/// relative residual rel_tol. grid must be >= 8.
EigenResult principal_eigenvalue(const RdmKernel& k, int grid, double rel_tol = 1e-8, int max_iter = 10000);
/// Doubles the grid from grid0 until sigma changes by less than `change`
/// (relative) or grid_max is reached.
EigenResult resolve_principal_eigenvalue(const RdmKernel& k, int grid0 = 8, int grid_max = 64, double change = 0.01);
double continuum_principal_eigenvalue(const RdmKernel& k);

struct ProfilePoint {
  double r = 0.0;
  double gamma = 0.0;
};

/// gamma_N(0, r e_1) on `points` equispaced r in (0, L/2].
std::vector<ProfilePoint> rdm_profile(const RdmKernel& k, int points = 64);

struct PowerFit {  // gamma ~ c0 + A r^{2-d}
  double c0 = 0.0, A = 0.0, r2 = 0.0;
  int used = 0;
};
struct ExpFit {  // log gamma ~ log amp - rate r
  double amp = 0.0, rate = 0.0, r2 = 0.0;
  int used = 0;
};
PowerFit fit_power_profile(const std::vector<ProfilePoint>& p, int d, double r_lo, double r_hi);
ExpFit fit_exponential_profile(const std::vector<ProfilePoint>& p, double r_lo, double r_hi);

/// gamma_N(-L/4 e_1, L/4 e_1) and phi_1(x/L) phi_1(y/L) at the same points.
struct FarField {
  double gamma = 0.0;
  double phi_product = 0.0;
};
FarField far_field(const RdmKernel& k);

enum class Verdict { ODLRO, NoODLRO, Inconclusive };
std::string to_string(Verdict v);

struct OdlroRow {
  long N = 0;
  double L = 0.0;
  double volume = 0.0;
  EigenResult eig;
  double sigma_over_volume = 0.0;
  double target = 0.0;    // rho - rho_c (supercritical) or 0
  double rel_error = 0.0; // |sigma/|Lambda| - target| / target
  FarField plateau;
  double plateau_main = 0.0;  // (rho - rho_c) phi_1 phi_1
  PowerFit power;
  ExpFit exponential;
};

struct OdlroReport {
  Boundary bc = Boundary::Periodic;
  int d = 3;
  double beta = 1.0, rho = 0.0, rho_c = 0.0;
  bool supercritical = false;
  std::vector<OdlroRow> rows;
  bool within_tolerance = false;  // supercritical: rel_error <= 10% at the top N
  bool monotone_trend = false;    // supercritical: rel_error decreasing along N
  double variation = 0.0;         // (max - min) / min of sigma_N
  bool bounded = false;           // subcritical: variation < 20%
  bool fits_ok = false;           // subcritical: every fit has rate > 0 and R^2 > 0.98
  Verdict verdict = Verdict::Inconclusive;
};

/// Throws std::domain_error for d <= 2 with rho above the (infinite) critical density claimed.
OdlroReport odlro_sweep(Boundary bc, int d, double beta, double rho, const std::vector<long>& N_sequence,
                        int grid0 = 8, int grid_max = 64);

}  // namespace bose
