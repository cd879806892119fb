// Acceptance run: one PASS/FAIL line per criterion, exit status = number of failures.
//
//   acceptance <path-to-bose-cli> [criterion ...]

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/zeta.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "bose/dickman.hpp"
#include "bose/loops.hpp"
#include "bose/pareto_walk.hpp"
#include "bose/partition.hpp"
#include "bose/poisson_dirichlet.hpp"
#include "bose/rdm.hpp"
#include "bose/special_functions.hpp"
#include "bose/thermo.hpp"
#include "bose/tilted.hpp"
#include "bose/trace_table.hpp"

using namespace bose;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string num(double v, int prec = 4) {
  std::ostringstream os;
  os.precision(prec);
  os << v;
  return os.str();
}

const Boundary kAll[] = {Boundary::Dirichlet, Boundary::Neumann, Boundary::Periodic, Boundary::Free};

// Cycle types of n as multiplicity vectors m[1..n], generated independently
// of the library enumeration.
void cycle_types(int n, int max_part, std::vector<int>& m, const std::function<void(const std::vector<int>&)>& visit) {
  if (n == 0) {
    visit(m);
    return;
  }
  for (int k = std::min(n, max_part); k >= 1; --k) {
    ++m[k];
    cycle_types(n - k, k, m, visit);
    --m[k];
  }
}

// log of prod_k t_k^{m_k} / (k^{m_k} m_k!)
long double log_weight(const std::vector<int>& m, const std::vector<double>& log_t) {
  long double s = 0.0L;
  for (std::size_t k = 1; k < m.size(); ++k)
    if (m[k]) s += m[k] * (static_cast<long double>(log_t[k - 1]) - std::log(static_cast<long double>(k))) - std::lgamma(m[k] + 1.0L);
  return s;
}

// ------------------------------------------------------------------ C1

Outcome c1() {
  double worst = 0.0;
  for (Boundary bc : kAll)
    for (int d : {1, 3})
      for (double L : {1.0, 2.0, 3.5}) {
        TraceTable t = build_trace_table({d, L, bc}, 1.0, 12);
        PartitionTable p = build_partition_table(t, 12);
        for (int n = 1; n <= 12; ++n) {
          std::vector<int> m(n + 1, 0);
          long double z = 0.0L;
          cycle_types(n, n, m, [&](const std::vector<int>& mm) { z += std::exp(log_weight(mm, t.log_t)); });
          double rel = std::abs(std::expm1(static_cast<double>(p.log_Z[n] - std::log(z))));
          worst = std::max(worst, rel);
        }
      }
  return {worst < 1e-12, "max relative error " + num(worst)};
}

// ------------------------------------------------------------------ C2

Outcome c2() {
  const long samples = 1000000;
  bool ok = true;
  std::string worst;
  double worst_ratio = 0.0;
  for (int N = 2; N <= 10; ++N) {
    BoxGeometry g = geometry_for_density(3, critical_density(3, 1.0), N, Boundary::Periodic);
    TraceTable t = build_trace_table(g, 1.0, N);
    PartitionTable p = build_partition_table(t, N);
    std::map<std::vector<int>, double> exact;
    long double z = 0.0L;
    std::vector<int> m(N + 1, 0);
    cycle_types(N, N, m, [&](const std::vector<int>& mm) {
      long double w = std::exp(log_weight(mm, t.log_t));
      exact[mm] = static_cast<double>(w);
      z += w;
    });
    for (auto& [k, v] : exact) v = static_cast<double>(v / z);

    std::map<std::vector<int>, long> freq;
    Rng rng(2024, static_cast<std::uint64_t>(N));
    for (long s = 0; s < samples; ++s) {
      LoopConfiguration c = sample_conditioned(p, N, rng);
      std::vector<int> key(N + 1, 0);
      for (auto [len, cnt] : c.counts) key[len] = static_cast<int>(cnt);
      ++freq[key];
    }
    double tv = 0.0, bound = 0.0;
    for (const auto& [key, pr] : exact) {
      double emp = static_cast<double>(freq[key]) / samples;
      tv += std::abs(emp - pr);
      bound += 3.0 * std::sqrt(pr * (1 - pr) / samples);
    }
    tv *= 0.5, bound *= 0.5;
    bool unseen = freq.size() > exact.size();
    ok = ok && tv < bound && !unseen;
    if (tv / bound > worst_ratio) {
      worst_ratio = tv / bound;
      worst = "N = " + std::to_string(N) + ": TV " + num(tv) + " vs bound " + num(bound);
    }
  }
  return {ok, "worst " + worst};
}

// ------------------------------------------------------------------ C3

Outcome c3() {
  using GL = boost::math::quadrature::gauss<double, 20>;
  const int panels = 2;
  double worst = 0.0;
  std::string where;
  for (Boundary bc : kAll)
    for (long N : {1L, 10L, 100L}) {
      BoxGeometry g = geometry_for_density(3, critical_density(3, 1.0), N, bc);
      RdmKernel k(build_partition_table(build_trace_table(g, 1.0, N), N), N);
      // composite Gauss-Legendre nodes on [-L/2, L/2]
      std::vector<double> x, w;
      const double h = g.L / panels;
      for (int p = 0; p < panels; ++p) {
        const double c = -g.L / 2 + (p + 0.5) * h;
        const auto& a = GL::abscissa();
        const auto& wt = GL::weights();
        for (std::size_t i = 0; i < a.size(); ++i) {
          if (a[i] == 0.0) {
            x.push_back(c), w.push_back(wt[i] * h / 2);
          } else {
            x.push_back(c - a[i] * h / 2), w.push_back(wt[i] * h / 2);
            x.push_back(c + a[i] * h / 2), w.push_back(wt[i] * h / 2);
          }
        }
      }
      double total = 0.0;
      std::vector<double> pt(3);
      for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = 0; j < x.size(); ++j)
          for (std::size_t l = 0; l < x.size(); ++l) {
            pt[0] = x[i], pt[1] = x[j], pt[2] = x[l];
            total += w[i] * w[j] * w[l] * eval_rdm(k, pt, pt);
          }
      double rel = std::abs(total - N) / N;
      if (rel >= worst) {
        worst = rel;
        where = std::string(to_string(bc)) + " N = " + std::to_string(N);
      }
    }
  return {worst < 1e-6, "max |trace - N| / N " + num(worst) + " at " + where};
}

// ------------------------------------------------------------------ C4

Outcome c4() {
  double want = std::pow(2 * M_PI, -1.5) * boost::math::zeta(1.5);
  double got = critical_density(3, 1.0);
  double err = std::abs(got - want);
  return {err < 1e-10, "rho_c = " + num(got, 13) + ", |error| " + num(err)};
}

// ------------------------------------------------------------------ C5

Outcome c5() {
  std::vector<long> Ns;
  for (int e = 7; e <= 13; ++e) Ns.push_back(1L << e);
  const double rc = critical_density(3, 1.0);
  bool ok = true;
  std::ostringstream detail;
  for (Boundary bc : {Boundary::Periodic, Boundary::Dirichlet}) {
    OdlroReport sup = odlro_sweep(bc, 3, 1.0, 2 * rc, Ns);
    OdlroReport sub = odlro_sweep(bc, 3, 1.0, rc / 2, Ns);
    const auto& top = sup.rows.back();
    bool s_ok = sup.within_tolerance && sup.monotone_trend;
    double min_r2 = 1.0, min_rate = INFINITY;
    for (const auto& r : sub.rows) min_r2 = std::min(min_r2, r.exponential.r2), min_rate = std::min(min_rate, r.exponential.rate);
    bool b_ok = sub.bounded && sub.fits_ok;
    ok = ok && s_ok && b_ok;
    detail << to_string(bc) << ": sigma/|Lambda| " << num(top.sigma_over_volume) << " vs " << num(top.target) << " (rel "
           << num(top.rel_error, 3) << (sup.monotone_trend ? ", decreasing" : ", not monotone") << ") "
           << (s_ok ? "ok" : "FAIL") << "; subcritical variation " << num(sub.variation, 3) << ", min rate "
           << num(min_rate, 3) << ", min R^2 " << num(min_r2, 4) << " " << (b_ok ? "ok" : "FAIL") << "; ";
  }
  return {ok, detail.str()};
}

// ------------------------------------------------------------------ C6

Outcome c6() {
  const double rho = 2 * critical_density(3, 1.0);
  const std::vector<long> Ns{1024, 2048, 4096, 8192};
  PdReport per = pd_convergence_test(Boundary::Periodic, 3, 1.0, rho, Ns, 20000, 606, 1000);
  PdReport fr = pd_convergence_test(Boundary::Free, 3, 1.0, rho, Ns, 20000, 607, 1000);
  const auto& first = per.rows.front();
  const auto& last = per.rows.back();
  std::ostringstream d;
  d << "periodic KS " << num(first.ks) << " -> " << num(last.ks) << " (confidence " << num(per.ks_confidence, 3) << ") "
    << (per.ks_decreasing ? "ok" : "FAIL") << "; long mass " << num(last.long_mass) << " +- " << num(last.long_mass_stderr, 2)
    << " vs " << num(rho - per.rho_c) << " " << (per.mass_within_2sigma ? "ok" : "FAIL") << "; free median L2/L1";
  for (const auto& r : fr.rows) d << " " << num(r.median_l2_over_l1, 3);
  d << " " << (fr.median_ratio_decreasing ? "ok" : "FAIL");
  return {per.ks_decreasing && per.mass_within_2sigma && fr.median_ratio_decreasing, d.str()};
}

// ------------------------------------------------------------------ C7

double laplace_series(double s) {
  double sum = 0.0, term = 1.0;
  for (int n = 1; n < 400; ++n) {
    term *= s / n;
    double v = term / n * ((n % 2) ? 1.0 : -1.0);
    sum += v;
    if (std::abs(v) < 1e-18 * std::max(1.0, std::abs(sum))) break;
  }
  return std::exp(-sum);
}

Outcome c7() {
  const double emg = std::exp(-0.57721566490153286061);
  double flat = 0.0;
  for (int i = 0; i <= 1000; ++i) flat = std::max(flat, std::abs(dickman_p(i / 1000.0) - emg));
  double at2 = std::abs(dickman_p(2.0) - emg * (1 - std::log(2.0)));
  double lap = 0.0;
  for (double s : {0.05, 0.3, 0.7, 1.0, 1.8, 2.5, 4.0, 6.0, 9.0, 15.0})
    lap = std::max(lap, std::abs(DickmanDensity::instance().laplace_transform(s) - laplace_series(s)));
  return {flat < 1e-8 && at2 < 1e-6 && lap < 1e-5,
          "flat part " + num(flat) + ", p(2) error " + num(at2) + ", Laplace max error " + num(lap)};
}

// ------------------------------------------------------------------ C8

Outcome c8() {
  ParetoWalkModel m(3);
  std::vector<double> dev;
  std::ostringstream d;
  for (long n : {100L, 1000L, 10000L}) {
    ParetoLcltReport r = pareto_lclt_check(m, n);
    dev.push_back(r.max_deviation);
    d << "n = " << n << ": max |ratio - 1| " << num(r.max_deviation, 3) << " on [" << r.window_lo << ", " << r.window_hi
      << "]; ";
  }
  bool improving = dev[1] < dev[0] && dev[2] < dev[1];
  return {dev.back() < 0.15 && improving, d.str()};
}

// ------------------------------------------------------------------ C9

Outcome c9() {
  const double L = 12.0, rho = critical_density(3, 1.0) / 2;
  BoxGeometry g{3, L, Boundary::Periodic};
  const long N = std::lround(rho * g.volume());
  TraceTable t = build_trace_table(g, 1.0, N);
  const double mu = finite_volume_chemical_potential(t, rho, N);
  LocalCltReport r = local_clt_check(tilted_rates(t, mu, N), 1000000, 909);
  return {r.sup_distance < 0.15 / std::sqrt(g.volume()),
          "mu = " + num(mu) + ", sup distance " + num(r.sup_distance) + " vs " + num(0.15 / std::sqrt(g.volume()))};
}

// ------------------------------------------------------------------ C10

std::string g_cli;

Outcome c10() {
  const char* subs[] = {"traces", "partition", "free-energy", "rdm-profile", "odlro-sweep", "sample-loops",
                        "pd-test", "lclt",      "dickman",     "clt-tilted",  "free-cells"};
  std::vector<std::string> failed;
  for (const char* s : subs) {
    std::string cmd = "\"" + g_cli + "\" " + s + " --selftest > /dev/null 2>&1";
    if (std::system(cmd.c_str()) != 0) failed.push_back(s);
  }
  std::string d = failed.empty() ? "all 11 subcommand suites pass" : "failing:";
  for (const auto& f : failed) d += " " + f;
  return {failed.empty(), d};
}

struct Criterion {
  std::string id;
  std::string title;
  double budget_s;
  Outcome (*run)();
};

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: acceptance <bose-cli> [C1 ... C10]\n";
    return 2;
  }
  g_cli = argv[1];
  std::set<std::string> only(argv + 2, argv + argc);

  const std::vector<Criterion> all = {
      {"C1", "partition recursion vs enumeration", 5, c1},
      {"C2", "conditioned sampler vs exact partition law", 60, c2},
      {"C3", "reduced density matrix trace identity", 60, c3},
      {"C4", "critical density", 1, c4},
      {"C5", "ODLRO dichotomy at desk scale", 1800, c5},
      {"C6", "Poisson-Dirichlet convergence", 600, c6},
      {"C7", "Dickman density", 10, c7},
      {"C8", "heavy-tail local limit theorem", 60, c8},
      {"C9", "tilted local CLT", 120, c9},
      {"C10", "self-test suites", 600, c10},
  };

  int failures = 0;
  for (const auto& c : all) {
    if (!only.empty() && !only.count(c.id)) continue;
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool in_time = secs <= c.budget_s;
    bool pass = o.pass && in_time;
    failures += !pass;
    std::printf("%s %s %s: %s (%.1f s of %.0f s budget%s)\n", pass ? "PASS" : "FAIL", c.id.c_str(), c.title.c_str(),
                o.detail.c_str(), secs, c.budget_s, in_time ? "" : ", over budget");
    std::fflush(stdout);
  }
  return failures;
}
