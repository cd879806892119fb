#include "bose/tilted.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "bose/rng.hpp"
#include "bose/special_functions.hpp"

namespace bose {

double TiltedEnsemble::mean_particles() const {
  double s = 0.0;
  for (std::size_t i = 0; i < rates.size(); ++i) s += (i + 1.0) * rates[i];
  return s;
}

double TiltedEnsemble::variance_particles() const {
  double s = 0.0;
  for (std::size_t i = 0; i < rates.size(); ++i) s += (i + 1.0) * (i + 1.0) * rates[i];
  return s;
}

double TiltedEnsemble::total_rate() const {
  double s = 0.0;
  for (double r : rates) s += r;
  return s;
}

TiltedEnsemble tilted_rates(const TraceTable& traces, double mu, long N) {
  if (mu > 0.0) throw std::domain_error("tilted ensemble needs mu <= 0");
  if (N < 1 || N > traces.n_max()) throw std::out_of_range("tilted ensemble: N outside trace table");
  TiltedEnsemble e;
  e.geometry = traces.geometry;
  e.beta = traces.beta;
  e.mu = mu;
  e.N = N;
  e.rates.resize(N);
  for (long k = 1; k <= N; ++k)
    e.rates[k - 1] = std::exp(traces.beta * mu * k + traces.log_t[k - 1] - std::log(static_cast<double>(k)));
  return e;
}

TiltedEnsemble tilted_rates(const BoxGeometry& g, double beta, double mu, long N) {
  if (mu > 0.0) throw std::domain_error("tilted ensemble needs mu <= 0");
  return tilted_rates(build_trace_table(g, beta, N), mu, N);
}

double finite_volume_chemical_potential(const TraceTable& traces, double rho, long N) {
  if (!(rho > 0.0)) throw std::domain_error("density must be positive");
  const double target = rho * std::pow(traces.geometry.L, traces.geometry.d);
  auto mass = [&](double mu) {
    double s = 0.0;
    for (long k = 1; k <= N; ++k) s += std::exp(traces.beta * mu * k + traces.log_t[k - 1]);
    return s;
  };
  if (mass(0.0) <= target) return 0.0;
  double lo = -1e6, hi = 0.0;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (mass(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

LocalCltReport local_clt_check(const TiltedEnsemble& e, long samples, std::uint64_t seed, int shards) {
  if (samples < 1) throw std::domain_error("need at least one sample");
  LocalCltReport r;
  r.samples = samples;
  r.center = e.N;
  r.mean_theory = e.mean_particles();
  r.var_theory = e.variance_particles();
  const double vol = std::pow(e.geometry.L, e.geometry.d);
  r.threshold = 0.15 / std::sqrt(vol);

  // compound representation: K ~ Poisson(total), lengths i.i.d. with P(k) = rate_k / total
  const double total = e.total_rate();
  std::vector<double> cdf(e.rates.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < e.rates.size(); ++i) cdf[i] = (acc += e.rates[i]) / total;
  cdf.back() = 1.0;

  std::vector<std::map<long, long>> hist(shards);
  for_each_shard(shards, [&](int s) {
    Rng rng(seed, static_cast<std::uint64_t>(s));
    long n = samples / shards + (s < samples % shards ? 1 : 0);
    for (long i = 0; i < n; ++i) {
      long K = rng.poisson(total), sum = 0;
      for (long j = 0; j < K; ++j) {
        double u = rng.uniform();
        sum += static_cast<long>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin()) + 1;
      }
      ++hist[s][sum];
    }
  });
  std::map<long, long> h;
  for (auto& m : hist)
    for (auto [k, c] : m) h[k] += c;

  double m1 = 0.0, m2 = 0.0;
  for (auto [k, c] : h) m1 += static_cast<double>(k) * c;
  m1 /= samples;
  for (auto [k, c] : h) m2 += (k - m1) * (k - m1) * c;
  r.mean = m1;
  r.var = m2 / std::max<long>(samples - 1, 1);

  const long lo = h.begin()->first, hi = h.rbegin()->first;
  std::vector<double> gauss;
  double gsum = 0.0;
  for (long j = lo - 10; j <= hi + 10; ++j) {
    gauss.push_back(std::exp(-(j - r.mean) * (j - r.mean) / (2.0 * r.var)));
    gsum += gauss.back();
  }
  for (long j = lo - 10; j <= hi + 10; ++j) {
    auto it = h.find(j);
    double emp = it == h.end() ? 0.0 : static_cast<double>(it->second) / samples;
    r.sup_distance = std::max(r.sup_distance, std::abs(emp - gauss[j - lo + 10] / gsum));
  }

  const long kmax = static_cast<long>(std::floor(std::sqrt(vol)));
  r.sandwich_min = std::numeric_limits<double>::infinity();
  for (long k = 0; k <= kmax; ++k) {
    auto it = h.find(r.center - k);
    double p = it == h.end() ? 0.0 : static_cast<double>(it->second) / samples;
    r.sandwich_min = std::min(r.sandwich_min, p * std::sqrt(vol));
    r.sandwich_max = std::max(r.sandwich_max, p * std::sqrt(vol));
  }
  r.sandwich_constant = r.sandwich_min > 0.0 ? std::max(r.sandwich_max, 1.0 / r.sandwich_min)
                                             : std::numeric_limits<double>::infinity();
  r.passed = r.sup_distance < r.threshold && std::isfinite(r.sandwich_constant);
  return r;
}

}  // namespace bose
