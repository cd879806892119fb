#pragma once

#include <vector>

namespace bose {

/// Steps with P(Z = j) = j^{-s} / zeta(s), s = d/2 + 1, j >= 1.
struct ParetoWalkModel {
  int d = 3;
  double s = 2.5;
  double zeta_s = 0.0;
  double a = 0.0;  // E[Z] = zeta(d/2) / zeta(d/2 + 1)

  explicit ParetoWalkModel(int d = 3);
  double pmf(long j) const;
  /// sum_{j > J} P(Z = j).
  double tail_mass(long J) const;
  /// Smallest J with tail_mass(J) < tol.
  long truncation_point(double tol) const;
};

/// P(S_n = m) for m = 0..M. Steps are cut at M, which leaves every returned
/// value exact; the FFT powering is done in double precision.
std::vector<double> pareto_sum_pmf(const ParetoWalkModel& model, long n, long M);

struct ParetoLcltRow {
  long k = 0;
  long m = 0;  // floor(a n) + k
  double p = 0.0;
  double ratio = 0.0;  // P(S_n = m) / (n P(Z = k))
  bool in_window = false;
};

struct ParetoLcltReport {
  long n = 0;
  double a = 0.0;
  long window_lo = 0, window_hi = 0;  // ceil(n^{2/d} ln n) .. 4n
  long support = 0;                   // M
  double step_deficit = 0.0;          // step mass beyond M, excluded exactly
  double max_deviation = 0.0;         // max |ratio - 1| inside the window
  std::vector<ParetoLcltRow> rows;
};

/// Ratios on the given k values; k outside the window are reported only.
ParetoLcltReport pareto_lclt_check(const ParetoWalkModel& model, long n, const std::vector<long>& ks);
/// Same with ~40 geometrically spaced k across the window plus a few below it.
ParetoLcltReport pareto_lclt_check(const ParetoWalkModel& model, long n);

}  // namespace bose
