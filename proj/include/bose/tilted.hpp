#pragma once

#include <cstdint>
#include <vector>

#include "bose/geometry.hpp"
#include "bose/trace_table.hpp"

namespace bose {

/// Loop PPP tilted by e^{beta mu k}: independent X_k ~ Poisson(e^{beta mu k} t_k / k), k = 1..N.
struct TiltedEnsemble {
  BoxGeometry geometry;
  double beta = 1.0;
  double mu = 0.0;
  long N = 0;
  std::vector<double> rates;  // index k-1

  double mean_particles() const;      // sum_k k * rate_k = |Lambda| rho_Lambda(mu)
  double variance_particles() const;  // sum_k k^2 * rate_k
  double total_rate() const;          // |Lambda| p_Lambda(mu)
};

/// Throws std::domain_error for mu > 0.
TiltedEnsemble tilted_rates(const TraceTable& traces, double mu, long N);
TiltedEnsemble tilted_rates(const BoxGeometry& g, double beta, double mu, long N);

/// Finite-volume chemical potential: the mu < 0 with sum_{k<=N} e^{beta mu k} t_k = rho |Lambda|.
double finite_volume_chemical_potential(const TraceTable& traces, double rho, long N);

struct LocalCltReport {
  long samples = 0;
  long center = 0;  // rho |Lambda|
  double mean_theory = 0.0, var_theory = 0.0;
  double mean = 0.0, var = 0.0;
  double sup_distance = 0.0;  // histogram vs discrete Gaussian at sample moments
  double threshold = 0.0;     // 0.15 / sqrt(|Lambda|)
  // sqrt(|Lambda|) P(N_Lambda = center - k) over 0 <= k <= sqrt(|Lambda|)
  double sandwich_min = 0.0, sandwich_max = 0.0;
  double sandwich_constant = 0.0;  // smallest C with C^{-1} <= . <= C
  bool passed = false;
};

/// Samples N_Lambda = sum_k k X_k and compares its histogram with a Gaussian.
LocalCltReport local_clt_check(const TiltedEnsemble& e, long samples, std::uint64_t seed, int shards = 16);

}  // namespace bose
