#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "bose/partition.hpp"
#include "bose/rng.hpp"

namespace bose {

/// Multiset of loop lengths: counts[k] = m_k.
struct LoopConfiguration {
  std::map<long, long> counts;

  long total() const;       // sum k m_k
  long loop_count() const;  // sum m_k
  /// Lengths L_1 >= L_2 >= ... with multiplicity.
  std::vector<long> ordered_lengths() const;
  bool operator==(const LoopConfiguration&) const = default;
};

/// T_N = ceil(L^2 sqrt(ln N)) and N+ = ceil(N^{2/d} ln^2 N).
struct LoopThresholds {
  long N = 0;
  double L = 0.0;
  int d = 3;
  long T_N = 0;
  long N_plus = 0;
  /// T_N < N+ < N; false for every desk-scale N in d = 3.
  bool asymptotic_regime = false;
};

LoopThresholds make_thresholds(long N, double L, int d);
/// Smallest N with T_N < N+ < N for the family L = (N / rho)^{1/d}.
long minimum_asymptotic_N(int d, double rho);

/// Independent X_k ~ Poisson(rates[k-1]).
LoopConfiguration sample_unconditioned(const std::vector<double>& rates, Rng& rng);
LoopConfiguration sample_unconditioned(const std::vector<double>& rates, std::uint64_t seed);

/// Exact draw from the loop PPP conditioned on N_Lambda = N.
LoopConfiguration sample_conditioned(const PartitionTable& table, long N, Rng& rng);
LoopConfiguration sample_conditioned(const PartitionTable& table, long N, std::uint64_t seed);

/// sum_{r=l1}^{l2} r m_r; throws std::domain_error if l1 > l2 or l1 < 1.
long particle_counts(const LoopConfiguration& c, long l1, long l2);
/// (particles in loops <= T_N, particles in loops > T_N).
std::pair<long, long> short_long_split(const LoopConfiguration& c, const LoopThresholds& t);

/// P(N^long = k) for the unconditioned PPP, with long = parts in (T_N, N].
double long_loop_pmf(const PartitionTable& table, const LoopThresholds& t, long k);
/// The same for every k = 0..N (index k).
std::vector<double> long_loop_pmf_table(const PartitionTable& table, const LoopThresholds& t);
/// e^{-gamma} e^{-beta lambda1 k / L^2} / T_N (lambda1 > 0) or / N (lambda1 = 0).
double long_loop_asymptote(const PartitionTable& table, const LoopThresholds& t, long k);

/// (2 pi beta)^{-d/2} sum_{k<=R} k^{-d/2}.
double truncated_critical_density(int d, double beta, long R);

struct ConcentrationRow {
  long N = 0;
  double L = 0.0;
  long T_N = 0;
  double mean_R = 0.0;      // E[N^{[1,R]}] / |Lambda|
  double stderr_R = 0.0;
  double rho_c_R = 0.0;
  double prob_R = 0.0;      // P(|N^{[1,R]}/|Lambda| - rho_c^{(R)}| > eps)
  double mean_short = 0.0;  // E[N^short] / |Lambda|
  double stderr_short = 0.0;
  double prob_short = 0.0;  // P(|N^short/|Lambda| - rho_c| > eps)
  double mean_long = 0.0;   // E[N^long] / |Lambda|
  double stderr_long = 0.0;
};

struct ConcentrationReport {
  Boundary bc = Boundary::Periodic;
  int d = 3;
  double beta = 1.0, rho = 0.0, rho_c = 0.0, eps = 0.0;
  long R = 0, samples = 0;
  std::uint64_t seed = 0;
  std::vector<ConcentrationRow> rows;
  bool decreasing_R = false;
  bool decreasing_short = false;
};

ConcentrationReport concentration_experiment(Boundary bc, int d, double beta, double rho,
                                             const std::vector<long>& N_sequence, long R, double eps,
                                             long samples, std::uint64_t seed, int shards = 8);

}  // namespace bose
