#include "bose/poisson_dirichlet.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "bose/dickman.hpp"
#include "bose/loops.hpp"
#include "bose/partition.hpp"
#include "bose/special_functions.hpp"
#include "bose/thermo.hpp"

namespace bose {

PDSample sample_pd1(Rng& rng, double mass_tol) {
  if (!(mass_tol > 0.0 && mass_tol < 1.0)) throw std::domain_error("mass tolerance must lie in (0, 1)");
  PDSample s;
  double rest = 1.0;
  while (rest >= mass_tol) {
    double y = rng.uniform_pos();
    double a = y * rest;
    s.atoms.push_back(a);
    rest -= a;
  }
  s.residual = rest;
  std::sort(s.atoms.begin(), s.atoms.end(), std::greater<>());
  return s;
}

PDSample sample_pd1(std::uint64_t seed, double mass_tol) {
  Rng rng(seed);
  return sample_pd1(rng, mass_tol);
}

double pd_marginal_density(std::span<const double> x) {
  if (x.empty()) throw std::domain_error("marginal density needs s >= 1");
  double sum = 0.0, prod = 1.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0 && x[i] < 1.0)) throw std::domain_error("marginal density: coordinate outside (0, 1)");
    if (i > 0 && x[i] > x[i - 1]) throw std::domain_error("marginal density: coordinates must be nonincreasing");
    sum += x[i];
    prod *= x[i];
  }
  if (!(sum < 1.0)) throw std::domain_error("marginal density: coordinates must sum to less than 1");
  return std::exp(kEulerGamma) / prod * dickman_p((1.0 - sum) / x.back());
}

namespace {

double f1(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 0.0;
  double v = 1.0 / x - 1.0;
  if (v >= DickmanDensity::instance().x_max()) return 0.0;
  return std::exp(kEulerGamma) / x * dickman_p(v);
}

// f^(1) is smooth between breakpoints, so fixed-order Gauss on a few panels suffices
template <class F>
double integrate(F f, double a, double b) {
  if (b <= a) return 0.0;
  constexpr int kPanels = 4;
  double s = 0.0, h = (b - a) / kPanels;
  for (int i = 0; i < kPanels; ++i)
    s += boost::math::quadrature::gauss<double, 20>::integrate(f, a + i * h, a + (i + 1) * h);
  return s;
}

double integrate(double a, double b) { return integrate(f1, a, b); }

}  // namespace

Pd1LargestCdf::Pd1LargestCdf() {
  // f^(1) is smooth between x = 1/(n+1); below 1/24 it vanishes with the table
  const int n_max = static_cast<int>(DickmanDensity::instance().x_max());
  for (int n = n_max; n >= 1; --n) knots_.push_back(1.0 / (n + 1.0));
  knots_.push_back(1.0);
  cum_.assign(knots_.size(), 0.0);
  for (std::size_t i = 1; i < knots_.size(); ++i) cum_[i] = cum_[i - 1] + integrate(knots_[i - 1], knots_[i]);
}

double Pd1LargestCdf::operator()(double x) const {
  if (x <= knots_.front()) return 0.0;
  if (x >= 1.0) return 1.0;
  auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
  std::size_t i = static_cast<std::size_t>(it - knots_.begin()) - 1;
  return std::min(1.0, cum_[i] + integrate(knots_[i], x));
}

const Pd1LargestCdf& Pd1LargestCdf::instance() {
  static const Pd1LargestCdf c;
  return c;
}

double golomb_dickman() {
  // E[V_1] = int_0^1 x f^(1)(x) dx, piecewise between breakpoints
  const int n_max = static_cast<int>(DickmanDensity::instance().x_max());
  double s = 0.0;
  double lo = 1.0 / (n_max + 1.0);
  for (int n = n_max; n >= 1; --n) {
    double hi = 1.0 / n;
    s += integrate([](double x) { return x * f1(x); }, lo, hi);
    lo = hi;
  }
  return s;
}

namespace {

double ks_sorted(const std::vector<double>& Fsorted) {
  const double n = static_cast<double>(Fsorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < Fsorted.size(); ++i)
    d = std::max({d, Fsorted[i] - i / n, (i + 1) / n - Fsorted[i]});
  return d;
}

}  // namespace

PdReport pd_convergence_test(Boundary bc, int d, double beta, double rho, const std::vector<long>& N_sequence,
                             long samples, std::uint64_t seed, int bootstrap, int shards) {
  if (d < 3) throw std::domain_error("PD test needs d >= 3");
  PdReport rep;
  rep.bc = bc;
  rep.d = d;
  rep.beta = beta;
  rep.rho = rho;
  rep.rho_c = critical_density(d, beta);
  rep.seed = seed;
  if (!(rho > rep.rho_c)) throw std::domain_error("PD test needs rho > rho_c");
  const double excess = rho - rep.rho_c;
  const Pd1LargestCdf& F = Pd1LargestCdf::instance();

  std::vector<std::vector<double>> cdf_values;  // F at each sample, per N
  for (long N : N_sequence) {
    BoxGeometry g = geometry_for_density(d, rho, N, bc);
    PartitionTable table = build_partition_table(build_trace_table(g, beta, N), N);
    LoopThresholds th = make_thresholds(N, g.L, d);
    const double vol = g.volume();

    struct Out {
      std::vector<double> l1, ratio, nlong;
    };
    std::vector<Out> out(shards);
    for_each_shard(shards, [&](int s) {
      Rng rng(seed, static_cast<std::uint64_t>(N) * 1024 + s);
      long n = samples / shards + (s < samples % shards ? 1 : 0);
      for (long i = 0; i < n; ++i) {
        LoopConfiguration c = sample_conditioned(table, N, rng);
        std::vector<long> L = c.ordered_lengths();
        out[s].l1.push_back(L[0] / (excess * vol));
        out[s].ratio.push_back(L.size() > 1 ? static_cast<double>(L[1]) / L[0] : 0.0);
        out[s].nlong.push_back(short_long_split(c, th).second / vol);
      }
    });
    std::vector<double> l1, ratio, nlong;
    for (auto& o : out) {
      l1.insert(l1.end(), o.l1.begin(), o.l1.end());
      ratio.insert(ratio.end(), o.ratio.begin(), o.ratio.end());
      nlong.insert(nlong.end(), o.nlong.begin(), o.nlong.end());
    }
    PdRow row;
    row.N = N;
    row.L = g.L;
    row.samples = samples;
    std::vector<double> Fv(l1.size());
    for (std::size_t i = 0; i < l1.size(); ++i) Fv[i] = F(l1[i]);
    std::vector<double> Fs = Fv;
    std::sort(Fs.begin(), Fs.end());
    row.ks = ks_sorted(Fs);
    cdf_values.push_back(std::move(Fv));
    double m = std::accumulate(nlong.begin(), nlong.end(), 0.0) / samples, v = 0.0;
    for (double x : nlong) v += (x - m) * (x - m);
    row.long_mass = m;
    row.long_mass_stderr = std::sqrt(v / (samples - 1.0) / samples);
    row.mean_l1_fraction = std::accumulate(l1.begin(), l1.end(), 0.0) / samples;
    std::nth_element(ratio.begin(), ratio.begin() + ratio.size() / 2, ratio.end());
    row.median_l2_over_l1 = ratio[ratio.size() / 2];
    rep.rows.push_back(row);
  }

  if (rep.rows.size() >= 2) {
    Rng rng(seed, 0xB007u);
    const auto& a = cdf_values.front();
    const auto& b = cdf_values.back();
    int wins = 0;
    std::vector<double> ra(a.size()), rb(b.size());
    for (int it = 0; it < bootstrap; ++it) {
      for (auto& x : ra) x = a[rng.next_u64() % a.size()];
      for (auto& x : rb) x = b[rng.next_u64() % b.size()];
      std::sort(ra.begin(), ra.end());
      std::sort(rb.begin(), rb.end());
      wins += ks_sorted(ra) > ks_sorted(rb);
    }
    rep.ks_confidence = bootstrap > 0 ? static_cast<double>(wins) / bootstrap : 0.0;
    rep.ks_decreasing = rep.ks_confidence >= 0.95;
    rep.median_ratio_decreasing = true;
    for (std::size_t i = 1; i < rep.rows.size(); ++i)
      rep.median_ratio_decreasing =
          rep.median_ratio_decreasing && rep.rows[i].median_l2_over_l1 < rep.rows[i - 1].median_l2_over_l1;
  }
  if (!rep.rows.empty()) {
    const PdRow& last = rep.rows.back();
    rep.mass_within_2sigma = std::abs(last.long_mass - excess) <= 2.0 * last.long_mass_stderr;
  }
  return rep;
}

}  // namespace bose
