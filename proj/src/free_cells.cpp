#include "bose/free_cells.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

#include "bose/rng.hpp"
#include "bose/special_functions.hpp"

namespace bose {

FreeCellsReport free_bc_cell_counts(const BoxGeometry& g, double beta, std::uint64_t seed, long samples,
                                    int shards) {
  if (g.d < 3) throw std::domain_error("free cell counts need d >= 3");
  if (std::abs(g.L - std::round(g.L)) > 1e-12 || g.L < 1.0)
    throw std::domain_error("free cell counts need an integer side length");
  if (samples < 1) throw std::domain_error("need at least one sample");
  FreeCellsReport r;
  r.d = g.d;
  r.L = g.L;
  r.beta = beta;
  r.samples = samples;
  r.seed = seed;
  r.cells = std::lround(std::pow(std::round(g.L), g.d));
  const double s = 0.5 * g.d + 1.0;
  r.p_free = std::pow(2.0 * kPi * beta, -0.5 * g.d) * zeta(s);
  r.mark_mean = zeta(0.5 * g.d) / zeta(s);
  r.rho_c = r.p_free * r.mark_mean;
  r.expected_slope = -s;

  // sums of independent Poisson cell counts are Poisson, so one draw covers all cells
  const double mean_loops = r.p_free * r.cells;
  struct Acc {
    std::map<long, long> hist;
    double loops = 0.0, particles = 0.0;
  };
  std::vector<Acc> acc(shards);
  for_each_shard(shards, [&](int sh) {
    Rng rng(seed, static_cast<std::uint64_t>(sh));
    long n = samples / shards + (sh < samples % shards ? 1 : 0);
    for (long i = 0; i < n; ++i) {
      long K = rng.poisson(mean_loops), total = 0;
      for (long j = 0; j < K; ++j) total += rng.zeta(s);
      ++acc[sh].hist[total];
      acc[sh].loops += K;
      acc[sh].particles += total;
    }
  });
  std::map<long, long> hist;
  for (auto& a : acc) {
    for (auto [k, c] : a.hist) hist[k] += c;
    r.mean_cell_count += a.loops;
    r.mean_cell_particles += a.particles;
  }
  r.mean_cell_count /= static_cast<double>(samples) * r.cells;
  r.mean_cell_particles /= static_cast<double>(samples) * r.cells;

  // geometric bins of n - rho_c |Lambda| starting well inside the one-big-jump regime
  const double shift = r.rho_c * r.cells;
  const double x0 = std::max(10.0, 4.0 * shift);
  std::vector<double> xs, ys, ws;
  for (double lo = x0;; lo *= 1.5) {
    double hi = lo * 1.5;
    long nlo = static_cast<long>(std::ceil(lo + shift)), nhi = static_cast<long>(std::ceil(hi + shift)) - 1;
    if (nhi < nlo) continue;
    long c = 0;
    for (auto it = hist.lower_bound(nlo); it != hist.end() && it->first <= nhi; ++it) c += it->second;
    if (c < 20) break;
    TailBin b{lo, hi, c, static_cast<double>(c) / samples / static_cast<double>(nhi - nlo + 1)};
    r.bins.push_back(b);
    xs.push_back(std::log(std::sqrt(lo * hi)));
    ys.push_back(std::log(b.pmf));
    ws.push_back(static_cast<double>(c));
  }
  if (xs.size() >= 3) {
    double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sw += ws[i], sx += ws[i] * xs[i], sy += ws[i] * ys[i];
      sxx += ws[i] * xs[i] * xs[i], sxy += ws[i] * xs[i] * ys[i];
    }
    r.fitted_slope = (sw * sxy - sx * sy) / (sw * sxx - sx * sx);
    r.slope_ok = std::abs(r.fitted_slope - r.expected_slope) <= 0.3;
  }
  return r;
}

}  // namespace bose
