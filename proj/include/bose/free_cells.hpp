#pragma once

#include <cstdint>
#include <vector>

#include "bose/geometry.hpp"

namespace bose {

struct TailBin {
  double x_lo = 0.0, x_hi = 0.0;  // range of n - rho_c |Lambda|
  long count = 0;
  double pmf = 0.0;               // mean P(N_Lambda = n) over the bin
};

struct FreeCellsReport {
  int d = 3;
  double L = 0.0;
  double beta = 1.0;
  long cells = 0;
  long samples = 0;
  std::uint64_t seed = 0;
  double p_free = 0.0;       // (2 pi beta)^{-d/2} zeta(d/2 + 1), Poisson mean per unit cell
  double mark_mean = 0.0;    // zeta(d/2) / zeta(d/2 + 1)
  double rho_c = 0.0;        // p_free * mark_mean
  double mean_cell_count = 0.0;     // empirical loops per cell
  double mean_cell_particles = 0.0; // empirical particles per cell
  std::vector<TailBin> bins;
  double fitted_slope = 0.0;  // log-log slope of the tail pmf against n - rho_c |Lambda|
  double expected_slope = 0.0;
  bool slope_ok = false;      // within 0.3 of -d/2 - 1
};

/// Marked cell representation of the free-bc loop soup on L^d unit cells:
/// each cell holds Poisson(p_free) loops with Pareto(d/2 + 1) lengths.
/// L must be a positive integer.
FreeCellsReport free_bc_cell_counts(const BoxGeometry& g, double beta, std::uint64_t seed, long samples,
                                    int shards = 8);

}  // namespace bose
