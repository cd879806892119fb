#include "bose/loops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "bose/special_functions.hpp"
#include "bose/spectral_kernel.hpp"
#include "bose/thermo.hpp"

namespace bose {

long LoopConfiguration::total() const {
  long s = 0;
  for (auto [k, m] : counts) s += k * m;
  return s;
}

long LoopConfiguration::loop_count() const {
  long s = 0;
  for (auto [k, m] : counts) s += m;
  return s;
}

std::vector<long> LoopConfiguration::ordered_lengths() const {
  std::vector<long> out;
  for (auto it = counts.rbegin(); it != counts.rend(); ++it) out.insert(out.end(), it->second, it->first);
  return out;
}

LoopThresholds make_thresholds(long N, double L, int d) {
  if (N < 2) throw std::domain_error("thresholds need N >= 2");
  if (!(L > 0.0) || d < 1) throw std::domain_error("thresholds need L > 0 and d >= 1");
  LoopThresholds t;
  t.N = N;
  t.L = L;
  t.d = d;
  const double ln = std::log(static_cast<double>(N));
  t.T_N = static_cast<long>(std::ceil(L * L * std::sqrt(ln)));
  t.N_plus = static_cast<long>(std::ceil(std::pow(static_cast<double>(N), 2.0 / d) * ln * ln));
  t.asymptotic_regime = t.T_N < t.N_plus && t.N_plus < N;
  return t;
}

long minimum_asymptotic_N(int d, double rho) {
  // N+ < N needs ln^2 N < N^{1-2/d}; scan powers of two then bisect
  auto ok = [&](double N) {
    LoopThresholds t = make_thresholds(static_cast<long>(N), std::pow(N / rho, 1.0 / d), d);
    return t.asymptotic_regime;
  };
  if (d <= 2) return -1;
  double hi = 4.0;
  while (!ok(hi)) {
    hi *= 2.0;
    if (hi > 4e18) return -1;
  }
  double lo = hi / 2.0;
  while (hi - lo > 1.0) {
    double mid = std::floor(0.5 * (lo + hi));
    (ok(mid) ? hi : lo) = mid;
  }
  return static_cast<long>(hi);
}

LoopConfiguration sample_unconditioned(const std::vector<double>& rates, Rng& rng) {
  LoopConfiguration c;
  for (std::size_t i = 0; i < rates.size(); ++i) {
    long x = rng.poisson(rates[i]);
    if (x > 0) c.counts[static_cast<long>(i) + 1] = x;
  }
  return c;
}

LoopConfiguration sample_unconditioned(const std::vector<double>& rates, std::uint64_t seed) {
  Rng rng(seed);
  return sample_unconditioned(rates, rng);
}

LoopConfiguration sample_conditioned(const PartitionTable& table, long N, Rng& rng) {
  if (N < 0 || N > table.n_max()) throw std::out_of_range("conditioned sampler: N outside partition table");
  LoopConfiguration c;
  long n = N;
  while (n > 0) {
    // sequential inversion of p(k) = t_k Z_{n-k} / (n Z_n)
    const double norm = std::log(static_cast<double>(n)) + table.log_Z[n];
    const double u = rng.uniform();
    double cdf = 0.0;
    long k = 1;
    for (; k < n; ++k) {
      cdf += std::exp(table.log_t[k - 1] + table.log_Z[n - k] - norm);
      if (u < cdf) break;
    }
    ++c.counts[k];
    n -= k;
  }
  return c;
}

LoopConfiguration sample_conditioned(const PartitionTable& table, long N, std::uint64_t seed) {
  Rng rng(seed);
  return sample_conditioned(table, N, rng);
}

long particle_counts(const LoopConfiguration& c, long l1, long l2) {
  if (l1 < 1 || l1 > l2) throw std::domain_error("particle_counts needs 1 <= l1 <= l2");
  long s = 0;
  for (auto it = c.counts.lower_bound(l1); it != c.counts.end() && it->first <= l2; ++it) s += it->first * it->second;
  return s;
}

std::pair<long, long> short_long_split(const LoopConfiguration& c, const LoopThresholds& t) {
  long shrt = 0, lng = 0;
  for (auto [k, m] : c.counts) (k <= t.T_N ? shrt : lng) += k * m;
  return {shrt, lng};
}

std::vector<double> long_loop_pmf_table(const PartitionTable& table, const LoopThresholds& t) {
  const long N = t.N;
  if (N > table.n_max()) throw std::out_of_range("long-loop pmf: N outside partition table");
  const long T = t.T_N;
  // restricted recursion W_k = (1/k) sum_{r in (T, N], r <= k} t_r W_{k-r}, in log space
  std::vector<double> logW(N + 1, -std::numeric_limits<double>::infinity());
  logW[0] = 0.0;
  std::vector<double> terms;
  for (long k = T + 1; k <= N; ++k) {
    terms.clear();
    for (long r = T + 1; r <= k; ++r)
      if (std::isfinite(logW[k - r])) terms.push_back(table.log_t[r - 1] + logW[k - r]);
    logW[k] = log_sum_exp(terms) - std::log(static_cast<double>(k));
  }
  double void_mass = 0.0;
  for (long r = T + 1; r <= N; ++r) void_mass += std::exp(table.log_t[r - 1]) / r;
  std::vector<double> p(N + 1, 0.0);
  for (long k = 0; k <= N; ++k) p[k] = std::isfinite(logW[k]) ? std::exp(logW[k] - void_mass) : 0.0;
  return p;
}

double long_loop_pmf(const PartitionTable& table, const LoopThresholds& t, long k) {
  if (k < 0 || k > t.N) return 0.0;
  if (k != 0 && k <= t.T_N) return 0.0;
  return long_loop_pmf_table(table, t)[k];
}

double long_loop_asymptote(const PartitionTable& table, const LoopThresholds& t, long k) {
  const BoxGeometry& g = table.geometry;
  double lambda1 = g.bc == Boundary::Dirichlet ? SpectralBasis(g.bc, g.d).lambda1() : 0.0;
  double base = std::exp(-kEulerGamma - table.beta * lambda1 * k / (g.L * g.L));
  return lambda1 > 0.0 ? base / t.T_N : base / t.N;
}

double truncated_critical_density(int d, double beta, long R) {
  double s = 0.0;
  for (long k = R; k >= 1; --k) s += std::pow(static_cast<double>(k), -0.5 * d);
  return std::pow(2.0 * kPi * beta, -0.5 * d) * s;
}

ConcentrationReport concentration_experiment(Boundary bc, int d, double beta, double rho,
                                             const std::vector<long>& N_sequence, long R, double eps,
                                             long samples, std::uint64_t seed, int shards) {
  if (d < 3) throw std::domain_error("concentration experiment needs d >= 3");
  ConcentrationReport rep;
  rep.bc = bc;
  rep.d = d;
  rep.beta = beta;
  rep.rho = rho;
  rep.rho_c = critical_density(d, beta);
  rep.eps = eps;
  rep.R = R;
  rep.samples = samples;
  rep.seed = seed;
  if (!(rho > rep.rho_c)) throw std::domain_error("concentration experiment needs rho > rho_c");
  const double rho_c_R = truncated_critical_density(d, beta, R);

  for (long N : N_sequence) {
    BoxGeometry g = geometry_for_density(d, rho, N, bc);
    PartitionTable table = build_partition_table(build_trace_table(g, beta, N), N);
    LoopThresholds th = make_thresholds(N, g.L, d);
    const double vol = g.volume();

    struct Acc {
      double sR = 0, sR2 = 0, sS = 0, sS2 = 0, sL = 0, sL2 = 0;
      long pR = 0, pS = 0;
    };
    std::vector<Acc> acc(shards);
    for_each_shard(shards, [&](int s) {
      Rng rng(seed, static_cast<std::uint64_t>(N) * 1024 + s);
      long n = samples / shards + (s < samples % shards ? 1 : 0);
      for (long i = 0; i < n; ++i) {
        LoopConfiguration c = sample_conditioned(table, N, rng);
        double xR = particle_counts(c, 1, std::min(R, N)) / vol;
        auto [ns, nl] = short_long_split(c, th);
        double xS = ns / vol, xL = nl / vol;
        Acc& a = acc[s];
        a.sR += xR, a.sR2 += xR * xR, a.sS += xS, a.sS2 += xS * xS, a.sL += xL, a.sL2 += xL * xL;
        a.pR += std::abs(xR - rho_c_R) > eps;
        a.pS += std::abs(xS - rep.rho_c) > eps;
      }
    });
    Acc t;
    for (const Acc& a : acc) {
      t.sR += a.sR, t.sR2 += a.sR2, t.sS += a.sS, t.sS2 += a.sS2, t.sL += a.sL, t.sL2 += a.sL2;
      t.pR += a.pR, t.pS += a.pS;
    }
    auto se = [&](double s, double s2) {
      double m = s / samples;
      return std::sqrt(std::max(0.0, s2 / samples - m * m) / samples);
    };
    ConcentrationRow row;
    row.N = N;
    row.L = g.L;
    row.T_N = th.T_N;
    row.rho_c_R = rho_c_R;
    row.mean_R = t.sR / samples;
    row.stderr_R = se(t.sR, t.sR2);
    row.prob_R = static_cast<double>(t.pR) / samples;
    row.mean_short = t.sS / samples;
    row.stderr_short = se(t.sS, t.sS2);
    row.prob_short = static_cast<double>(t.pS) / samples;
    row.mean_long = t.sL / samples;
    row.stderr_long = se(t.sL, t.sL2);
    rep.rows.push_back(row);
  }
  rep.decreasing_R = rep.decreasing_short = true;
  for (std::size_t i = 1; i < rep.rows.size(); ++i) {
    rep.decreasing_R = rep.decreasing_R && rep.rows[i].prob_R <= rep.rows[i - 1].prob_R;
    rep.decreasing_short = rep.decreasing_short && rep.rows[i].prob_short <= rep.rows[i - 1].prob_short;
  }
  return rep;
}

}  // namespace bose
