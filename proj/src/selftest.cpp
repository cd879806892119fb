#include "bose/selftest.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/expint.hpp>
#include <boost/math/special_functions/zeta.hpp>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "bose/dickman.hpp"
#include "bose/free_cells.hpp"
#include "bose/loops.hpp"
#include "bose/pareto_walk.hpp"
#include "bose/partition.hpp"
#include "bose/poisson_dirichlet.hpp"
#include "bose/rdm.hpp"
#include "bose/rng.hpp"
#include "bose/special_functions.hpp"
#include "bose/spectral_kernel.hpp"
#include "bose/thermo.hpp"
#include "bose/tilted.hpp"
#include "bose/trace_table.hpp"

namespace bose {
namespace {

class Checks {
 public:
  void add(std::string name, bool ok, const std::string& detail = {}) {
    out_.push_back({std::move(name), ok, detail});
  }
  // Runs fn and records any exception as a failure of `name`.
  void guard(const std::string& name, const std::function<void()>& fn) {
    try {
      fn();
    } catch (const std::exception& e) {
      add(name, false, std::string("exception: ") + e.what());
    }
  }
  std::vector<CheckResult> take() { return std::move(out_); }

 private:
  std::vector<CheckResult> out_;
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

template <class F>
double gauss_legendre(F f, double a, double b, int panels) {
  double s = 0.0, h = (b - a) / panels;
  for (int i = 0; i < panels; ++i)
    s += boost::math::quadrature::gauss<double, 20>::integrate(f, a + i * h, a + (i + 1) * h);
  return s;
}

const Boundary kSpectral[] = {Boundary::Dirichlet, Boundary::Neumann, Boundary::Periodic};
const Boundary kAll[] = {Boundary::Dirichlet, Boundary::Neumann, Boundary::Periodic, Boundary::Free};

// ---------------------------------------------------------------- kernel

void kernel_suite(Checks& c) {
  c.guard("eigenfunctions are L2-orthonormal", [&] {
    double worst = 0.0;
    for (Boundary bc : kSpectral) {
      SpectralBasis b(bc, 1);
      auto modes = b.modes(8);
      for (const auto& m : modes)
        for (const auto& n : modes) {
          double ip = gauss_legendre(
              [&](double x) { return b.eigenfunction(m.level, m.component, x) * b.eigenfunction(n.level, n.component, x); },
              -0.5, 0.5, 16);
          bool same = m.level == n.level && m.component == n.component;
          worst = std::max(worst, std::abs(ip - (same ? 1.0 : 0.0)));
        }
    }
    c.add("eigenfunctions are L2-orthonormal", worst < 1e-8, "max deviation " + fmt(worst));
  });

  c.guard("principal eigenvalue", [&] {
    bool ok = std::abs(SpectralBasis(Boundary::Dirichlet, 3).lambda1() - 1.5 * kPi * kPi) < 1e-12 &&
              SpectralBasis(Boundary::Neumann, 3).lambda1() == 0.0 &&
              SpectralBasis(Boundary::Periodic, 3).lambda1() == 0.0;
    c.add("principal eigenvalue", ok);
  });

  c.guard("free kernel at coincident points", [&] {
    BoxGeometry g{3, 4.0, Boundary::Free};
    std::vector<double> x{0.1, -0.2, 0.3};
    double v = eval_kernel(g, 1.0, 1.0, x, x);
    double want = std::pow(2.0 * kPi, -1.5);
    c.add("free kernel at coincident points", std::abs(v - want) < 1e-15, fmt(v));
  });

  c.guard("kernel symmetry and positivity", [&] {
    Rng rng(7);
    bool sym = true, pos = true;
    for (Boundary bc : kAll) {
      BoxGeometry g{3, 3.0, bc};
      for (int i = 0; i < 100; ++i) {
        std::vector<double> x(3), y(3);
        for (int a = 0; a < 3; ++a) x[a] = 3.0 * (rng.uniform() - 0.5), y[a] = 3.0 * (rng.uniform() - 0.5);
        double k = 0.05 + 20.0 * rng.uniform();
        double gxy = eval_kernel(g, 1.0, k, x, y), gyx = eval_kernel(g, 1.0, k, y, x);
        sym = sym && gxy == gyx;
        pos = pos && gxy >= 0.0;
      }
    }
    c.add("kernel symmetry is exact", sym);
    c.add("kernel is nonnegative", pos);
  });

  c.guard("semigroup identity", [&] {
    Rng rng(11);
    const double L = 2.0;
    double worst = 0.0;
    for (Boundary bc : kSpectral) {
      BoxGeometry g{1, L, bc};
      for (int i = 0; i < 50; ++i) {
        double x = L * (rng.uniform() - 0.5), y = L * (rng.uniform() - 0.5);
        double s = L * L * (0.02 + 0.5 * rng.uniform()), t = L * L * (0.02 + 0.5 * rng.uniform());
        double lhs = gauss_legendre(
            [&](double z) {
              std::vector<double> X{x}, Y{y}, Z{z};
              return eval_kernel(g, 1.0, s, X, Z) * eval_kernel(g, 1.0, t, Z, Y);
            },
            -L / 2, L / 2, 64);
        std::vector<double> X{x}, Y{y};
        double rhs = eval_kernel(g, 1.0, s + t, X, Y);
        worst = std::max(worst, std::abs(lhs - rhs));
      }
    }
    c.add("semigroup identity holds for Dirichlet/Neumann/periodic", worst < 1e-10, "max error " + fmt(worst));
  });

  c.guard("free kernel fails the semigroup identity", [&] {
    Rng rng(13);
    const double L = 2.0;
    BoxGeometry g{1, L, Boundary::Free};
    double max_deficit = 0.0;
    bool all_below = true;
    for (int i = 0; i < 50; ++i) {
      double x = L * (rng.uniform() - 0.5), y = L * (rng.uniform() - 0.5);
      double s = L * L * (0.02 + 0.5 * rng.uniform()), t = L * L * (0.02 + 0.5 * rng.uniform());
      double lhs = gauss_legendre(
          [&](double z) {
            std::vector<double> X{x}, Y{y}, Z{z};
            return eval_kernel(g, 1.0, s, X, Z) * eval_kernel(g, 1.0, t, Z, Y);
          },
          -L / 2, L / 2, 64);
      std::vector<double> X{x}, Y{y};
      double rhs = eval_kernel(g, 1.0, s + t, X, Y);
      all_below = all_below && lhs < rhs;
      max_deficit = std::max(max_deficit, (rhs - lhs) / rhs);
    }
    c.add("free kernel restricted to the box fails the semigroup identity", all_below && max_deficit > 0.01,
          "max relative deficit " + fmt(max_deficit));
  });

  c.guard("image and spectral sums agree in the crossover band", [&] {
    const double tol = 1e-12;
    double worst = 0.0;
    Rng rng(17);
    for (Boundary bc : kSpectral)
      for (int i = 0; i <= 30; ++i) {
        double t = 0.05 + 0.15 * i / 30.0;
        double x = rng.uniform() - 0.5, y = rng.uniform() - 0.5;
        double a = unit_kernel_1d(bc, t, x, y, tol, KernelMethod::Images).value;
        double b = unit_kernel_1d(bc, t, x, y, tol, KernelMethod::Spectral).value;
        worst = std::max(worst, std::abs(a - b));
      }
    c.add("image and spectral sums agree in the crossover band", worst <= 2 * tol, "max gap " + fmt(worst));
  });

  c.guard("Dirichlet trace below Neumann trace", [&] {
    bool ok = true;
    for (double L : {1.0, 5.0}) {
      TraceTable d = build_trace_table({3, L, Boundary::Dirichlet}, 1.0, 2000);
      TraceTable n = build_trace_table({3, L, Boundary::Neumann}, 1.0, 2000);
      for (long k = 1; k <= 2000; ++k) ok = ok && d.log_t[k - 1] <= n.log_t[k - 1];
    }
    c.add("Dirichlet trace below Neumann trace", ok);
  });

  c.guard("trace lower bounds", [&] {
    bool ok = true;
    for (Boundary bc : kSpectral) {
      TraceTable t = build_trace_table({3, 4.0, bc}, 1.0, 3000);
      double l1 = SpectralBasis(bc, 3).lambda1();
      for (long k = 1; k <= 3000; ++k) ok = ok && t.log_t[k - 1] >= -l1 * k / 16.0 - 1e-12;
    }
    c.add("t_k >= exp(-lambda1 beta k / L^2)", ok);
  });

  c.guard("Dirichlet unit trace", [&] {
    double direct = 0.0;
    for (int n = 30; n >= 1; --n) direct += std::exp(-kPi * kPi * n * n / 2.0);
    TraceTable t = build_trace_table({1, 1.0, Boundary::Dirichlet}, 1.0, 1);
    c.add("Dirichlet d=1 L=1 t_1 matches the direct eigenvalue sum",
          std::abs(t.trace(1) - direct) < 1e-13 * direct && std::abs(direct - 0.0071918) < 1e-7, fmt(t.trace(1)));
  });

  c.guard("free trace", [&] {
    TraceTable t = build_trace_table({3, 2.0, Boundary::Free}, 1.0, 1);
    c.add("free trace |Lambda| (2 pi beta)^{-3/2}", std::abs(t.trace(1) - 8.0 * std::pow(2.0 * kPi, -1.5)) < 1e-14,
          fmt(t.trace(1)));
  });

  c.guard("long-time limits", [&] {
    std::vector<double> x{0.3}, y{-0.1};
    double g = eval_kernel({1, 1.0, Boundary::Periodic}, 1.0, 400.0, x, y);
    TraceTable n = build_trace_table({3, 1.0, Boundary::Neumann}, 1.0, 400);
    c.add("periodic kernel and Neumann trace tend to 1", std::abs(g - 1.0) < 1e-12 && std::abs(n.trace(400) - 1.0) < 1e-12);
  });

  c.guard("kernel bound report", [&] {
    std::vector<long> ks{1, 10, 50, 200, 1000};
    KernelBoundsReport r = verify_kernel_bounds({3, 8.0, Boundary::Dirichlet}, 1.0, ks, 4);
    bool upper = true;
    for (const auto& row : r.rows)
      if (row.k == 200) upper = row.trace_upper_constant >= 0.0 && row.trace_upper_constant < 10.0;
    c.add("kernel envelope and trace lower bound hold on the grid", r.max_violation <= 1e-12,
          "max violation " + fmt(r.max_violation));
    c.add("Dirichlet t_k / e^{-lambda1 t} - 1 decays at the spectral gap", upper);
  });

  c.guard("domain errors", [&] {
    bool threw = false;
    try {
      std::vector<double> x{0.6}, y{0.0};
      eval_kernel({1, 1.0, Boundary::Periodic}, 1.0, 1.0, x, y);
    } catch (const std::domain_error&) {
      threw = true;
    }
    bool trunc = false;
    try {
      unit_kernel_1d(Boundary::Neumann, 0.001, 0.1, 0.2, 1e-300, KernelMethod::Spectral, 3);
    } catch (const TruncationError& e) {
      trunc = e.achieved_bound() > 0.0;
    }
    c.add("points outside the box are rejected", threw);
    c.add("unreachable tolerance reports the achieved bound", trunc);
  });

  c.guard("trace table round trip", [&] {
    TraceTable t = build_trace_table({3, 2.5, Boundary::Neumann}, 0.7, 50);
    std::stringstream ss;
    write_trace_table(ss, t);
    TraceTable u = read_trace_table(ss);
    c.add("trace table round trip", u.log_t == t.log_t && u.err == t.err && u.geometry.bc == t.geometry.bc &&
                                        u.beta == t.beta && u.geometry.L == t.geometry.L);
  });
}

// ---------------------------------------------------------------- ensemble

long double brute_log_Z(int n, const std::vector<double>& log_t) {
  long double s = 0.0L;
  for (const Partition& m : enumerate_partitions(n)) s += std::exp(static_cast<long double>(log_partition_weight(m, log_t)));
  return std::log(s);
}

void ensemble_suite(Checks& c) {
  c.guard("recursion matches enumeration", [&] {
    double worst = 0.0;
    for (Boundary bc : kAll)
      for (int d : {1, 3}) {
        TraceTable t = build_trace_table({d, 2.0, bc}, 1.0, 12);
        PartitionTable p = build_partition_table(t, 12);
        for (int n = 1; n <= 12; ++n) {
          double rel = std::abs(std::expm1(static_cast<double>(p.log_Z[n] - brute_log_Z(n, t.log_t))));
          worst = std::max(worst, rel);
        }
      }
    c.add("recursion matches enumeration for N <= 12", worst < 1e-12, "max relative error " + fmt(worst));
  });

  c.guard("small-N closed forms", [&] {
    TraceTable t = build_trace_table({3, 2.0, Boundary::Free}, 1.0, 2);
    PartitionTable p = build_partition_table(t, 2);
    double t1 = t.trace(1), t2 = t.trace(2);
    double z2 = 0.5 * t1 * t1 + 0.5 * t2;
    c.add("Z_1 = t_1 and Z_2 = t_1^2/2 + t_2/2",
          std::abs(std::exp(p.log_Z[1]) - t1) < 1e-14 * t1 && std::abs(std::exp(p.log_Z[2]) - z2) < 1e-14 * z2);
    auto q = cycle_length_distribution(p, 2);
    c.add("cycle distribution for n = 2", std::abs(q[0] - t1 * t1 / (2 * z2)) < 1e-14 &&
                                               std::abs(q[1] - t2 / (2 * z2)) < 1e-14);
  });

  c.guard("cycle distribution normalisation", [&] {
    PartitionTable p = build_partition_table(build_trace_table({3, 6.0, Boundary::Periodic}, 1.0, 300), 300);
    double worst = 0.0;
    bool nonneg = true;
    for (long n = 1; n <= 300; ++n) {
      auto q = cycle_length_distribution(p, n);
      worst = std::max(worst, std::abs(std::accumulate(q.begin(), q.end(), 0.0) - 1.0));
      for (double v : q) nonneg = nonneg && v >= 0.0;
    }
    c.add("cycle distribution sums to 1", worst < 1e-10 && nonneg, "max deviation " + fmt(worst));
    c.add("recursion residual below 1e-10", p.max_residual() < 1e-10, fmt(p.max_residual()));
  });

  c.guard("size-biased cycle marginal", [&] {
    TraceTable t = build_trace_table({3, 2.0, Boundary::Free}, 1.0, 10);
    PartitionTable p = build_partition_table(t, 10);
    auto parts = enumerate_partitions(10);
    std::vector<long double> marg(11, 0.0L);
    long double z = 0.0L;
    for (const auto& m : parts) {
      long double w = std::exp(static_cast<long double>(log_partition_weight(m, t.log_t)));
      z += w;
      for (int k = 1; k <= 10; ++k) marg[k] += w * k * m[k] / 10.0L;
    }
    auto q = cycle_length_distribution(p, 10);
    double worst = 0.0;
    for (int k = 1; k <= 10; ++k) worst = std::max(worst, std::abs(q[k - 1] - static_cast<double>(marg[k] / z)));
    c.add("cycle distribution equals the size-biased marginal over 42 partitions", parts.size() == 42 && worst < 1e-13,
          "max error " + fmt(worst));
  });

  c.guard("partition table round trip", [&] {
    PartitionTable p = build_partition_table(build_trace_table({3, 3.0, Boundary::Dirichlet}, 1.0, 40), 40);
    std::stringstream ss;
    write_partition_table(ss, p);
    PartitionTable q = read_partition_table(ss);
    c.add("partition table round trip", q.log_Z == p.log_Z && q.log_t == p.log_t && q.residual == p.residual);
  });

  c.guard("N beyond trace table", [&] {
    bool threw = false;
    try {
      build_partition_table(build_trace_table({3, 3.0, Boundary::Dirichlet}, 1.0, 5), 6);
    } catch (const std::out_of_range&) {
      threw = true;
    }
    c.add("N beyond the trace table is a range error", threw);
  });
}

// ---------------------------------------------------------------- thermo

void thermo_suite(Checks& c) {
  c.guard("critical density", [&] {
    double want = std::pow(2.0 * kPi, -1.5) * boost::math::zeta(1.5);
    double got = critical_density(3, 1.0);
    c.add("rho_c(d=3, beta=1) matches (2 pi)^{-3/2} zeta(3/2)", std::abs(got - want) < 1e-10, fmt(got));
    c.add("rho_c is infinite for d <= 2", std::isinf(critical_density(2, 1.0)));
  });

  c.guard("density series", [&] {
    double worst = 0.0;
    for (double mu : {-0.01, -0.1, -0.7, -3.0}) {
      double direct = 0.0;
      for (long k = 2000000; k >= 1; --k) direct += std::exp(mu * k) * std::pow(2.0 * kPi * k, -1.5);
      worst = std::max(worst, std::abs(density(mu, 1.0, 3) - direct) / direct);
    }
    c.add("density matches direct summation", worst < 1e-11, "max relative error " + fmt(worst));
  });

  c.guard("chemical potential round trip", [&] {
    double worst = 0.0;
    bool monotone = true;
    double prev = 0.0;
    for (int i = 0; i < 20; ++i) {
      double mu = -std::pow(10.0, -3.0 + 4.0 * i / 19.0);
      double rho = density(mu, 1.0, 3);
      worst = std::max(worst, std::abs(chemical_potential(rho, 1.0, 3) - mu));
      if (i > 0) monotone = monotone && rho < prev;
      prev = rho;
    }
    c.add("mu(rho(mu)) = mu", worst < 1e-8, "max error " + fmt(worst));
    c.add("rho(mu) increasing in mu", monotone);
    double rho = critical_density(3, 1.0) / 2;
    double res = std::abs(density(chemical_potential(rho, 1.0, 3), 1.0, 3) - rho);
    c.add("mu(rho_c/2) residual below 1e-10", res < 1e-10, fmt(res));
    c.add("mu = 0 above rho_c", chemical_potential(0.3, 1.0, 3) == 0.0);
    double small = 1e-6;
    c.add("small-density bound", chemical_potential(small, 1.0, 3) <= std::log(small * std::pow(2 * kPi, 1.5)) + 1e-6);
  });

  c.guard("pressure derivative", [&] {
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      double mu = -0.02 - 2.0 * i / 19.0, beta = 1.3, h = 1e-5;
      double dp = (pressure(mu + h, beta, 3) - pressure(mu - h, beta, 3)) / (2 * h) / beta;
      worst = std::max(worst, std::abs(dp - density(mu, beta, 3)));
    }
    c.add("rho = beta^{-1} dp/dmu", worst < 1e-6, "max error " + fmt(worst));
  });

  c.guard("free energy", [&] {
    double rc = critical_density(3, 1.0);
    double a = free_energy(rc + 0.1, 1.0, 3), b = free_energy(rc + 0.2, 1.0, 3);
    c.add("free energy flat above rho_c", std::abs(a - b) < 1e-10, fmt(a) + " vs " + fmt(b));
    double flat = -std::pow(2 * kPi, -1.5) * boost::math::zeta(2.5);
    c.add("supercritical free energy equals -(2 pi)^{-3/2} zeta(5/2)", std::abs(a - flat) < 1e-12, fmt(a));
    double prev = 1.0;
    bool shrinking = true;
    for (double eps : {1e-2, 1e-3, 1e-4, 1e-5, 1e-6}) {
      double gap = std::abs(free_energy(rc - eps, 1.0, 3) - free_energy(rc + eps, 1.0, 3));
      shrinking = shrinking && gap < prev;
      prev = gap;
    }
    c.add("free energy continuous at rho_c", shrinking && prev < 1e-6, "gap " + fmt(prev));
  });
}

// ---------------------------------------------------------------- loops

// TV distance between sampled and exact partition laws, and the 3 sigma bound
std::pair<double, double> partition_tv(const PartitionTable& p, const std::vector<double>& log_t, int N, long samples,
                                       std::uint64_t seed) {
  auto parts = enumerate_partitions(N);
  std::vector<double> w(parts.size());
  long double z = 0.0L;
  for (std::size_t i = 0; i < parts.size(); ++i) z += std::exp(static_cast<long double>(log_partition_weight(parts[i], log_t)));
  for (std::size_t i = 0; i < parts.size(); ++i)
    w[i] = static_cast<double>(std::exp(static_cast<long double>(log_partition_weight(parts[i], log_t))) / z);
  std::map<std::vector<int>, long> freq;
  Rng rng(seed);
  for (long s = 0; s < samples; ++s) {
    LoopConfiguration c = sample_conditioned(p, N, rng);
    std::vector<int> m(N + 1, 0);
    for (auto [k, n] : c.counts) m[k] = static_cast<int>(n);
    ++freq[m];
  }
  double tv = 0.0, bound = 0.0;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    double emp = static_cast<double>(freq[parts[i]]) / samples;
    tv += std::abs(emp - w[i]);
    bound += 3.0 * std::sqrt(w[i] * (1.0 - w[i]) / samples);
  }
  return {0.5 * tv, 0.5 * bound};
}

void loops_suite(Checks& c) {
  TraceTable t = build_trace_table({3, 2.0, Boundary::Free}, 1.0, 64);
  PartitionTable p = build_partition_table(t, 64);

  c.guard("conditioned sampler basics", [&] {
    bool one = sample_conditioned(p, 1, 5).counts == std::map<long, long>{{1, 1}};
    bool conserve = true;
    Rng rng(3);
    for (int i = 0; i < 1000; ++i) conserve = conserve && sample_conditioned(p, 64, rng).total() == 64;
    bool det = sample_conditioned(p, 64, 99) == sample_conditioned(p, 64, 99);
    c.add("N = 1 gives the single 1-loop", one);
    c.add("conditioned samples carry exactly N particles", conserve);
    c.add("identical seeds give identical configurations", det);
  });

  c.guard("conditioned sampler law", [&] {
    for (int N : {3, 6}) {
      auto [tv, bound] = partition_tv(p, t.log_t, N, 200000, 1000 + N);
      c.add("partition frequencies at N = " + std::to_string(N) + " within the 3 sigma bound", tv < bound,
            "TV " + fmt(tv) + " bound " + fmt(bound));
    }
  });

  c.guard("unconditioned Campbell means", [&] {
    TraceTable tp = build_trace_table({3, 3.0, Boundary::Periodic}, 1.0, 40);
    std::vector<double> rates(40);
    double mass = 0.0, particles = 0.0, var_n = 0.0;
    for (int k = 1; k <= 40; ++k) {
      rates[k - 1] = tp.trace(k) / k;
      mass += rates[k - 1];
      particles += tp.trace(k);
      var_n += static_cast<double>(k) * tp.trace(k);
    }
    Rng rng(21);
    const long n = 100000;
    double sc = 0.0, sn = 0.0;
    for (long i = 0; i < n; ++i) {
      LoopConfiguration cfg = sample_unconditioned(rates, rng);
      sc += cfg.loop_count();
      sn += cfg.total();
    }
    double zc = (sc / n - mass) / std::sqrt(mass / n), zn = (sn / n - particles) / std::sqrt(var_n / n);
    c.add("E[loop count] = sum t_k / k", std::abs(zc) < 5.0, "z = " + fmt(zc));
    c.add("E[N_total] = sum t_k", std::abs(zn) < 5.0, "z = " + fmt(zn));
    c.add("zero rates give an empty configuration", sample_unconditioned(std::vector<double>(10, 0.0), 1).counts.empty());
  });

  c.guard("particle counts", [&] {
    LoopConfiguration cfg = sample_conditioned(p, 64, 8);
    long T = 5;
    bool ok = particle_counts(cfg, 1, 64) == cfg.total() &&
              particle_counts(cfg, 1, T) + particle_counts(cfg, T + 1, 64) == cfg.total();
    bool threw = false;
    try {
      particle_counts(cfg, 3, 2);
    } catch (const std::domain_error&) {
      threw = true;
    }
    c.add("particle counts partition the total", ok);
    c.add("l1 > l2 is a domain error", threw);
    // E[N^{[1,1]} | N = 3] from the three partitions
    double t1 = t.trace(1), t2 = t.trace(2), t3 = t.trace(3);
    double w1 = t1 * t1 * t1 / 6, w2 = t1 * t2 / 2, w3 = t3 / 3;
    double want = (3 * w1 + 1 * w2) / (w1 + w2 + w3);
    Rng rng(44);
    const long n = 200000;
    double s = 0.0;
    for (long i = 0; i < n; ++i) s += particle_counts(sample_conditioned(p, 3, rng), 1, 1);
    double sd = std::sqrt(3.0 * want / n);
    c.add("E[N^{[1,1]} | N = 3] matches the partition weights", std::abs(s / n - want) < 5 * sd, fmt(s / n) + " vs " + fmt(want));
  });

  c.guard("long-loop pmf", [&] {
    TraceTable tp = build_trace_table({3, 2.0, Boundary::Periodic}, 1.0, 8);
    PartitionTable pp = build_partition_table(tp, 8);
    LoopThresholds th = make_thresholds(8, 2.0, 3);
    th.T_N = 2;
    auto pmf = long_loop_pmf_table(pp, th);
    double vm = 0.0;
    for (int r = 3; r <= 8; ++r) vm += tp.trace(r) / r;
    double worst = std::abs(pmf[0] - std::exp(-vm));
    for (int k = 1; k <= 8; ++k) {
      long double s = 0.0L;
      for (const auto& m : enumerate_partitions(k)) {
        if (m[1] || (k >= 2 && m[2])) continue;
        s += std::exp(static_cast<long double>(log_partition_weight(m, tp.log_t)));
      }
      worst = std::max(worst, std::abs(pmf[k] - static_cast<double>(s) * std::exp(-vm)));
    }
    c.add("restricted recursion matches enumeration with parts in [3, 8]", worst < 1e-14, "max error " + fmt(worst));
    c.add("long-loop pmf vanishes on (0, T_N]", long_loop_pmf(pp, th, 2) == 0.0 && long_loop_pmf(pp, th, 1) == 0.0);
  });

  c.guard("partition function as a PPP probability", [&] {
    const int N = 10;
    TraceTable tp = build_trace_table({3, 2.5, Boundary::Neumann}, 1.0, N);
    PartitionTable pp = build_partition_table(tp, N);
    // exact law of sum_k k X_k restricted to [0, N] by convolution
    std::vector<double> dist(N + 1, 0.0);
    dist[0] = 1.0;
    double mass = 0.0;
    for (int k = 1; k <= N; ++k) {
      double lam = tp.trace(k) / k;
      mass += lam;
      std::vector<double> next(N + 1, 0.0);
      for (int j = 0; j <= N; ++j) {
        double pj = std::exp(-lam);
        for (int x = 0; j + k * x <= N; ++x) {
          next[j + k * x] += dist[j] * pj;
          pj *= lam / (x + 1);
        }
      }
      dist = next;
    }
    double lhs = std::exp(mass) * dist[N], rhs = std::exp(pp.log_Z[N]);
    c.add("exp(sum t_k/k) P(N_Lambda = N) = Z_N", std::abs(lhs - rhs) < 1e-8 * rhs, fmt(lhs) + " vs " + fmt(rhs));
  });

  c.guard("thresholds", [&] {
    LoopThresholds th = make_thresholds(1000, 10.0, 3);
    bool ok = th.T_N == static_cast<long>(std::ceil(100.0 * std::sqrt(std::log(1000.0)))) &&
              th.N_plus == static_cast<long>(std::ceil(100.0 * std::pow(std::log(1000.0), 2)));
    c.add("T_N and N+ formulas", ok);
    c.add("desk-scale N is outside the asymptotic ordering", !th.asymptotic_regime);
    // 1 - rho_c^(R)/rho_c = zeta(3/2, R+1)/zeta(3/2), tail by Euler-Maclaurin
    bool tails = true;
    for (long R : {50L, 250L, 1000L}) {
      double r = R + 1.0;
      double tail = 2.0 / std::sqrt(r) + 0.5 * std::pow(r, -1.5) + std::pow(r, -2.5) / 8.0;
      double want = 1.0 - tail / boost::math::zeta(1.5);
      tails = tails && std::abs(truncated_critical_density(3, 1.0, R) / critical_density(3, 1.0) - want) < 1e-6;
    }
    c.add("rho_c^(R) / rho_c matches the Hurwitz tail", tails);
    c.add("rho_c^(R) / rho_c > 0.95 from R = 250",
          truncated_critical_density(3, 1.0, 250) / critical_density(3, 1.0) > 0.95,
          "R = 50 gives " + fmt(truncated_critical_density(3, 1.0, 50) / critical_density(3, 1.0)));
  });
}

// ---------------------------------------------------------------- tilted

void tilted_suite(Checks& c) {
  c.guard("untilted rates", [&] {
    TraceTable t = build_trace_table({3, 4.0, Boundary::Periodic}, 1.0, 50);
    TiltedEnsemble e = tilted_rates(t, 0.0, 50);
    double worst = 0.0;
    for (int k = 1; k <= 50; ++k) worst = std::max(worst, std::abs(e.rates[k - 1] / (t.trace(k) / k) - 1.0));
    c.add("mu = 0 recovers t_k / k", worst < 1e-14);
    bool threw = false;
    try {
      tilted_rates(t, 0.1, 50);
    } catch (const std::domain_error&) {
      threw = true;
    }
    c.add("mu > 0 is a domain error", threw);
  });

  c.guard("tilted mean", [&] {
    const double L = 8.0;
    double rho = critical_density(3, 1.0) / 2;
    long N = std::lround(rho * L * L * L);
    TraceTable t = build_trace_table({3, L, Boundary::Periodic}, 1.0, N);
    double mu = chemical_potential(rho, 1.0, 3);
    TiltedEnsemble e = tilted_rates(t, mu, N);
    double direct = 0.0;
    for (long k = 1; k <= N; ++k) direct += t.trace(k) * std::exp(mu * k);
    c.add("Campbell mean equals sum t_k e^{beta mu k}", std::abs(e.mean_particles() / direct - 1.0) < 1e-12,
          fmt(e.mean_particles()));
    double thermo = density(mu, 1.0, 3) * L * L * L;
    c.add("finite-volume mean within 2% of rho(mu)|Lambda|", std::abs(e.mean_particles() / thermo - 1.0) < 0.02,
          fmt(e.mean_particles()) + " vs " + fmt(thermo));
    LocalCltReport r = local_clt_check(e, 100000, 5, 4);
    double z = (r.mean - r.mean_theory) / std::sqrt(r.var_theory / r.samples);
    c.add("sampled mean within MC error", std::abs(z) < 5.0, "z = " + fmt(z));
    c.add("sampled variance close to sum k^2 rate_k", std::abs(r.var / r.var_theory - 1.0) < 0.05);
  });
}

// ---------------------------------------------------------------- dickman

double laplace_series(double s) {
  // int_0^1 (1 - e^{-sx})/x dx = sum_{n>=1} (-1)^{n+1} s^n / (n n!)
  double sum = 0.0, term = 1.0;
  for (int n = 1; n < 200; ++n) {
    term *= s / n;
    double v = term / n * ((n % 2) ? 1.0 : -1.0);
    sum += v;
    if (std::abs(v) < 1e-18) break;
  }
  return std::exp(-sum);
}

void dickman_suite(Checks& c) {
  const double emg = std::exp(-kEulerGamma);
  c.guard("Dickman values", [&] {
    double worst = 0.0;
    for (int i = 0; i <= 100; ++i) worst = std::max(worst, std::abs(dickman_p(i / 100.0) - emg));
    c.add("p = e^{-gamma} on [0, 1]", worst < 1e-8, fmt(worst));
    c.add("p(0.5) = 0.5614595", std::abs(dickman_p(0.5) - 0.5614595) < 1e-7);
    c.add("p(2) = e^{-gamma}(1 - log 2)", std::abs(dickman_p(2.0) - emg * (1 - std::log(2.0))) < 1e-6, fmt(dickman_p(2.0)));
  });

  c.guard("Dickman delay equation", [&] {
    double worst = 0.0;
    for (double x : {2.3, 3.7, 5.1, 7.9}) {
      double h = 1e-4;
      double dp = (dickman_p(x + h) - dickman_p(x - h)) / (2 * h);
      worst = std::max(worst, std::abs(x * dp + dickman_p(x - 1.0)));
    }
    c.add("x p'(x) = -p(x - 1)", worst < 1e-7, fmt(worst));
    bool dec = true;
    for (double x = 1.0; x < 20.0; x += 0.01) dec = dec && dickman_p(x + 0.01) <= dickman_p(x);
    c.add("p decreasing on [1, inf)", dec);
  });

  c.guard("Dickman Laplace transform", [&] {
    double worst = 0.0;
    for (double s : {0.1, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0, 4.0, 6.0})
      worst = std::max(worst, std::abs(DickmanDensity::instance().laplace_transform(s) - laplace_series(s)));
    c.add("Laplace transform matches at 10 points", worst < 1e-5, "max error " + fmt(worst));
    double mass = DickmanDensity::instance().laplace_transform(0.0);
    c.add("p integrates to 1", std::abs(mass - 1.0) < 1e-6, fmt(mass));
  });
}

// ---------------------------------------------------------------- pd

void pd_suite(Checks& c) {
  c.guard("marginal density values", [&] {
    std::vector<double> x{0.6};
    c.add("f1(0.6) = 1/0.6", std::abs(pd_marginal_density(x) - 1.0 / 0.6) < 1e-12);
    std::vector<double> y{0.5, 0.3};
    c.add("f2(0.5, 0.3) finite", std::isfinite(pd_marginal_density(y)) && pd_marginal_density(y) > 0.0);
    bool threw = false;
    try {
      std::vector<double> z{0.3, 0.5};
      pd_marginal_density(z);
    } catch (const std::domain_error&) {
      threw = true;
    }
    c.add("unordered coordinates are a domain error", threw);
  });

  c.guard("marginal normalisation", [&] {
    double mass = 0.0;
    for (int n = 1; n <= 30; ++n)
      mass += gauss_legendre([](double x) { std::vector<double> v{x}; return pd_marginal_density(v); }, 1.0 / (n + 1), 1.0 / n, 4);
    c.add("f1 integrates to 1", std::abs(mass - 1.0) < 1e-4, fmt(mass));
  });

  c.guard("f2 marginalises to f1", [&] {
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
      double x1 = 0.12 + 0.08 * i;
      double top = std::min(x1, 1.0 - x1) - 1e-12;
      std::vector<double> knots{0.0};
      for (int n = 40; n >= 1; --n) {
        double b = (1.0 - x1) / (n + 1);  // (1 - x1 - x2)/x2 crosses n
        if (b > 0.0 && b < top) knots.push_back(b);
      }
      knots.push_back(top);
      std::sort(knots.begin(), knots.end());
      double m = 0.0;
      for (std::size_t j = 1; j < knots.size(); ++j)
        m += gauss_legendre(
            [&](double x2) {
              if (x2 <= 0.0) return 0.0;
              std::vector<double> v{x1, x2};
              return pd_marginal_density(v);
            },
            knots[j - 1], knots[j], 4);
      std::vector<double> v{x1};
      worst = std::max(worst, std::abs(m - pd_marginal_density(v)));
    }
    c.add("int f2(x1, x2) dx2 = f1(x1) at 10 points", worst < 1e-3, "max error " + fmt(worst));
  });

  c.guard("largest-atom CDF", [&] {
    double worst = 0.0;
    const Pd1LargestCdf& F = Pd1LargestCdf::instance();
    for (double x : {0.2, 0.3, 0.45, 0.5, 0.62, 0.8, 0.95})
      worst = std::max(worst, std::abs(F(x) - std::exp(kEulerGamma) * dickman_p(1.0 / x)));
    c.add("quadrature CDF equals the Dickman closed form", worst < 1e-8, fmt(worst));
  });

  c.guard("stick breaking", [&] {
    Rng rng(31);
    bool sums = true, sorted = true;
    double s1 = 0.0, big = 0.0, big2 = 0.0;
    const long n = 200000;
    for (long i = 0; i < n; ++i) {
      // first stick before sorting
      Rng probe(31, static_cast<std::uint64_t>(i) + 1);
      s1 += 1.0 - probe.uniform();
      PDSample s = sample_pd1(rng, 1e-10);
      double tot = std::accumulate(s.atoms.begin(), s.atoms.end(), 0.0);
      sums = sums && tot >= 1.0 - 1e-10 && tot <= 1.0 + 1e-12;
      sorted = sorted && std::is_sorted(s.atoms.rbegin(), s.atoms.rend());
      big += s.atoms[0];
      big2 += s.atoms[0] * s.atoms[0];
    }
    c.add("atom sums in [1 - tol, 1]", sums);
    c.add("atoms sorted descending", sorted);
    c.add("E[first stick] = 1/2", std::abs(s1 / n - 0.5) < 5 * std::sqrt(1.0 / 12 / n));
    // Golomb-Dickman constant int_0^inf exp(-x - E1(x)) dx
    double gd = gauss_legendre([](double x) { return x <= 0 ? 1.0 : std::exp(-x - boost::math::expint(1, x)); }, 0.0, 60.0, 200);
    double m = big / n, sd = std::sqrt((big2 / n - m * m) / n);
    c.add("E[largest atom] equals the Golomb-Dickman constant", std::abs(m - gd) < 5 * sd,
          fmt(m) + " vs " + fmt(gd));
    c.add("Golomb-Dickman by quadrature of f1", std::abs(golomb_dickman() - gd) < 1e-8, fmt(golomb_dickman()));
  });
}

// ---------------------------------------------------------------- pareto

void pareto_suite(Checks& c) {
  ParetoWalkModel m(3);
  c.guard("step law", [&] {
    double a = boost::math::zeta(1.5) / boost::math::zeta(2.5);
    c.add("mean a = zeta(3/2)/zeta(5/2)", std::abs(m.a - a) < 1e-12 && std::abs(a - 1.94737) < 1e-5, fmt(m.a));
    long J = m.truncation_point(1e-8);
    double s = 0.0;
    for (long j = J; j >= 1; --j) s += std::pow(static_cast<double>(j), -2.5);
    double deficit = 1.0 - s / boost::math::zeta(2.5);
    c.add("truncation point leaves deficit below 1e-8", deficit < 1e-8 && deficit > 0.0, "J = " + std::to_string(J));
    c.add("tail mass estimate", std::abs(m.tail_mass(J) - deficit) < 1e-12, fmt(m.tail_mass(J)) + " vs " + fmt(deficit));
  });

  c.guard("exact convolution", [&] {
    const long M = 400;
    auto p1 = pareto_sum_pmf(m, 1, M);
    auto p2 = pareto_sum_pmf(m, 2, M);
    auto p5 = pareto_sum_pmf(m, 5, M);
    double w1 = 0.0, w2 = 0.0;
    for (long j = 1; j <= M; ++j) w1 = std::max(w1, std::abs(p1[j] - m.pmf(j)));
    for (long s = 2; s <= M; ++s) {
      double e = 0.0;
      for (long i = 1; i < s; ++i) e += m.pmf(i) * m.pmf(s - i);
      w2 = std::max(w2, std::abs(p2[s] - e) / e);
    }
    // n = 5 against repeated direct convolution
    std::vector<double> q(M + 1, 0.0);
    q[0] = 1.0;
    for (int step = 0; step < 5; ++step) {
      std::vector<double> nq(M + 1, 0.0);
      for (long i = 0; i <= M; ++i)
        if (q[i] != 0.0)
          for (long j = 1; i + j <= M; ++j) nq[i + j] += q[i] * m.pmf(j);
      q = nq;
    }
    double w5 = 0.0;
    for (long s = 5; s <= M; ++s) w5 = std::max(w5, std::abs(p5[s] - q[s]) / q[s]);
    c.add("n = 1 returns the step pmf", w1 == 0.0);
    c.add("n = 2 matches pairwise enumeration", w2 < 1e-9, fmt(w2));
    c.add("n = 5 matches direct convolution", w5 < 1e-9, fmt(w5));
  });

  c.guard("local limit ratios", [&] {
    ParetoLcltReport r3 = pareto_lclt_check(m, 1000), r4 = pareto_lclt_check(m, 10000);
    c.add("LLT ratio within 15% at n = 1e4", r4.max_deviation < 0.15, fmt(r4.max_deviation));
    c.add("LLT ratio improves from n = 1e3 to 1e4", r4.max_deviation < r3.max_deviation);
  });
}

// ---------------------------------------------------------------- free cells

void free_cells_suite(Checks& c) {
  c.guard("free cells", [&] {
    FreeCellsReport r = free_bc_cell_counts({3, 2.0, Boundary::Free}, 1.0, 77, 1000000, 4);
    c.add("a p_free = rho_c", std::abs(r.rho_c - critical_density(3, 1.0)) < 1e-12, fmt(r.rho_c));
    double sd = std::sqrt(r.p_free / (r.samples * r.cells));
    c.add("Poisson cell-count mean = p_free", std::abs(r.mean_cell_count - r.p_free) < 5 * sd, fmt(r.mean_cell_count));
    c.add("particles per cell near rho_c", std::abs(r.mean_cell_particles / r.rho_c - 1.0) < 0.05,
          fmt(r.mean_cell_particles));
    c.add("tail slope near -d/2 - 1", r.slope_ok, fmt(r.fitted_slope));
  });
}

// ---------------------------------------------------------------- rdm

void rdm_suite(Checks& c) {
  c.guard("trace identity", [&] {
    double worst = 0.0;
    for (Boundary bc : kAll)
      for (long N : {1L, 10L, 100L}) {
        BoxGeometry g = geometry_for_density(3, critical_density(3, 1.0), N, bc);
        PartitionTable p = build_partition_table(build_trace_table(g, 1.0, N), N);
        RdmKernel k(p, N);
        worst = std::max(worst, std::abs(rdm_trace_quadrature(k) - N) / N);
      }
    c.add("int gamma_N(x, x) dx = N", worst < 1e-6, "max relative error " + fmt(worst));
  });

  c.guard("single particle", [&] {
    BoxGeometry g{3, 2.0, Boundary::Dirichlet};
    TraceTable t = build_trace_table(g, 1.0, 1);
    RdmKernel k(build_partition_table(t, 1), 1);
    std::vector<double> x{0.1, 0.2, -0.3}, y{-0.4, 0.0, 0.5};
    double want = eval_kernel(g, 1.0, 1.0, x, y) / t.trace(1);
    c.add("gamma_1 = g_beta / t_1", std::abs(eval_rdm(k, x, y) - want) < 1e-12 * want);
  });

  c.guard("symmetry and bounds", [&] {
    Rng rng(5);
    bool sym = true, pos = true, order = true;
    for (Boundary bc : kAll) {
      BoxGeometry g = geometry_for_density(3, 0.3, 200, bc);
      RdmKernel k(build_partition_table(build_trace_table(g, 1.0, 200), 200), 200);
      for (int i = 0; i < 25; ++i) {
        std::vector<double> x(3), y(3);
        for (int a = 0; a < 3; ++a) x[a] = g.L * (rng.uniform() - 0.5), y[a] = g.L * (rng.uniform() - 0.5);
        double a = eval_rdm(k, x, y), b = eval_rdm(k, y, x);
        sym = sym && a == b;
        pos = pos && a >= 0.0;
      }
      EigenResult e = principal_eigenvalue(k, 8);
      order = order && e.lower_bound <= e.sigma * (1 + 1e-12) && e.sigma <= 200.0 && e.converged;
    }
    c.add("gamma symmetric", sym);
    c.add("gamma nonnegative", pos);
    c.add("Rayleigh lower bound <= sigma <= N", order);
  });

  c.guard("grid resolution", [&] {
    BoxGeometry g = geometry_for_density(3, 2 * critical_density(3, 1.0), 1024, Boundary::Periodic);
    RdmKernel k(build_partition_table(build_trace_table(g, 1.0, 1024), 1024), 1024);
    EigenResult a = principal_eigenvalue(k, 16), b = principal_eigenvalue(k, 32);
    c.add("doubling the grid changes sigma by < 1%", std::abs(a.sigma - b.sigma) < 0.01 * b.sigma,
          fmt(a.sigma) + " vs " + fmt(b.sigma));
    c.add("Nystrom sigma matches the continuum eigenvalue", std::abs(b.sigma - b.continuum) < 1e-3 * b.continuum);
  });

  c.guard("free-bc plateau", [&] {
    double rho = 2 * critical_density(3, 1.0);
    BoxGeometry g = geometry_for_density(3, rho, 1024, Boundary::Free);
    RdmKernel k(build_partition_table(build_trace_table(g, 1.0, 1024), 1024), 1024);
    FarField f = far_field(k);
    c.add("free-bc far field has no phi_1 modulation", f.phi_product == 1.0 && f.gamma > 0.0, fmt(f.gamma));
  });
}

const std::map<std::string, void (*)(Checks&)>& registry() {
  static const std::map<std::string, void (*)(Checks&)> r = {
      {"kernel", kernel_suite}, {"ensemble", ensemble_suite}, {"thermo", thermo_suite},
      {"loops", loops_suite},   {"tilted", tilted_suite},     {"dickman", dickman_suite},
      {"pd", pd_suite},         {"pareto", pareto_suite},     {"free-cells", free_cells_suite},
      {"rdm", rdm_suite},
  };
  return r;
}

}  // namespace

std::vector<std::string> selftest_suites() {
  std::vector<std::string> out;
  for (const auto& [name, fn] : registry()) out.push_back(name);
  return out;
}

std::vector<CheckResult> run_selftest_suite(const std::string& suite) {
  auto it = registry().find(suite);
  if (it == registry().end()) throw std::invalid_argument("unknown self-test suite: " + suite);
  Checks c;
  it->second(c);
  return c.take();
}

int run_selftest(const std::string& suite, std::ostream& os) {
  int failures = 0;
  for (const auto& r : run_selftest_suite(suite)) {
    os << (r.passed ? "PASS " : "FAIL ") << suite << ": " << r.name;
    if (!r.detail.empty()) os << " (" << r.detail << ")";
    os << '\n';
    failures += !r.passed;
  }
  return failures;
}

}  // namespace bose
