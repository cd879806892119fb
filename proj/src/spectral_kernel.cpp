#include "bose/spectral_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "bose/special_functions.hpp"

namespace bose {
namespace {

double gauss(double t, double z) { return std::exp(-z * z / (2.0 * t)) / std::sqrt(2.0 * kPi * t); }

// Geometric tail bound for sum_{n > m} exp(-t a n^2), times `weight`.
double square_tail(double t, double a, int m, double weight) {
  double first = std::exp(-t * a * (m + 1.0) * (m + 1.0));
  double ratio = std::exp(-t * a * (2.0 * m + 3.0));
  return weight * first / (1.0 - ratio);
}

[[noreturn]] void throw_truncation(const char* what, double t, double achieved) {
  std::ostringstream os;
  os << "spectral_kernel: " << what << " at reduced time " << t << " cannot reach tolerance; achieved bound "
     << achieved;
  throw TruncationError(os.str(), achieved);
}

Bounded spectral_1d(Boundary bc, double t, double x, double y, double tol, int max_terms) {
  // Non-constant levels have eigenvalue a n^2 for n >= 1 and |phi phi'| <= 2.
  double a = (bc == Boundary::Periodic) ? 2.0 * kPi * kPi : 0.5 * kPi * kPi;
  double sum = (bc == Boundary::Dirichlet) ? 0.0 : 1.0;
  double u = x + 0.5, v = y + 0.5;
  for (int n = 1;; ++n) {
    double w = std::exp(-t * a * n * n);
    switch (bc) {
      case Boundary::Dirichlet: sum += 2.0 * w * std::sin(n * kPi * u) * std::sin(n * kPi * v); break;
      case Boundary::Neumann: sum += 2.0 * w * std::cos(n * kPi * u) * std::cos(n * kPi * v); break;
      case Boundary::Periodic: sum += 2.0 * w * std::cos(2.0 * kPi * n * (x - y)); break;
      case Boundary::Free: break;
    }
    double tail = square_tail(t, a, n, 2.0);
    if (tail <= tol) return {sum, tail};
    if (n >= max_terms) throw_truncation("eigenfunction sum", t, tail);
  }
}

Bounded images_1d(Boundary bc, double t, double x, double y, double tol, int max_terms) {
  if (bc == Boundary::Periodic) {
    double sum = gauss(t, x - y);
    for (int m = 1;; ++m) {
      sum += gauss(t, x - y + m) + gauss(t, x - y - m);
      // |m'| > m images sit at distance >= m
      double tail = 2.0 * gauss(t, m) / (1.0 - std::exp(-(2.0 * m + 1.0) / (2.0 * t)));
      if (tail <= tol) return {sum, tail};
      if (m >= max_terms) throw_truncation("image sum", t, tail);
    }
  }
  double sign = (bc == Boundary::Dirichlet) ? -1.0 : 1.0;
  double u = x + 0.5, v = y + 0.5;
  double sum = gauss(t, u - v) + sign * gauss(t, u + v);
  for (int m = 1;; ++m) {
    sum += gauss(t, u - v + 2.0 * m) + gauss(t, u - v - 2.0 * m);
    sum += sign * (gauss(t, u + v + 2.0 * m) + gauss(t, u + v - 2.0 * m));
    // |m'| > m images sit at distance >= 2m
    double tail = 4.0 * gauss(t, 2.0 * m) / (1.0 - std::exp(-(8.0 * m + 4.0) / (2.0 * t)));
    if (tail <= tol) return {sum, tail};
    if (m >= max_terms) throw_truncation("image sum", t, tail);
  }
}

}  // namespace

SpectralBasis::SpectralBasis(Boundary bc, int d, double eps, int max_levels)
    : bc_(bc), d_(d), eps_(eps), max_levels_(max_levels) {
  if (bc == Boundary::Free) throw std::domain_error("free boundary condition has no spectral basis");
  if (d < 1) throw std::domain_error("dimension must be positive");
  if (!(eps > 0.0)) throw std::domain_error("truncation tolerance must be positive");
}

double SpectralBasis::scale() const {
  return bc_ == Boundary::Periodic ? 2.0 * kPi * kPi : 0.5 * kPi * kPi;
}

int SpectralBasis::key(int level) const {
  int n = (bc_ == Boundary::Dirichlet) ? level + 1 : level;
  return n * n;
}

int SpectralBasis::multiplicity(int level) const {
  return (bc_ == Boundary::Periodic && level > 0) ? 2 : 1;
}

double SpectralBasis::eigenfunction(int level, int component, double x) const {
  const double u = x + 0.5;
  const double r2 = std::sqrt(2.0);
  switch (bc_) {
    case Boundary::Dirichlet: return r2 * std::sin((level + 1) * kPi * u);
    case Boundary::Neumann: return level == 0 ? 1.0 : r2 * std::cos(level * kPi * u);
    case Boundary::Periodic:
      if (level == 0) return 1.0;
      return component == 0 ? r2 * std::cos(2.0 * kPi * level * x) : r2 * std::sin(2.0 * kPi * level * x);
    case Boundary::Free: break;
  }
  return 0.0;
}

double SpectralBasis::phi1(std::span<const double> x) const {
  double p = 1.0;
  for (double xi : x) p *= eigenfunction(0, 0, xi);
  return p;
}

int SpectralBasis::levels_needed(double t) const {
  const double l0 = level_eigenvalue(0);
  for (int n = 1; n <= max_levels_; ++n) {
    if (std::exp(-t * (level_eigenvalue(n) - l0)) < eps_ / d_) return n;
  }
  throw TruncationError("spectral_kernel: basis truncation exceeds max_levels",
                        std::exp(-t * (level_eigenvalue(max_levels_) - l0)));
}

std::vector<SpectralBasis::Mode> SpectralBasis::modes(int levels) const {
  std::vector<Mode> out;
  for (int n = 0; n < levels; ++n)
    for (int c = 0; c < multiplicity(n); ++c) out.push_back({level_eigenvalue(n), key(n), n, c});
  return out;
}

Bounded unit_kernel_1d(Boundary bc, double t, double x, double y, double tol, KernelMethod method,
                       int max_terms) {
  if (!(t > 0.0)) throw std::domain_error("kernel time must be positive");
  if (x > y) std::swap(x, y);  // exact symmetry regardless of summation order
  if (bc == Boundary::Free) return {gauss(t, x - y), 0.0};
  if (method == KernelMethod::Auto) method = t < kDualSwitchTime ? KernelMethod::Images : KernelMethod::Spectral;
  return method == KernelMethod::Images ? images_1d(bc, t, x, y, tol, max_terms)
                                        : spectral_1d(bc, t, x, y, tol, max_terms);
}

Bounded unit_log_trace_1d(Boundary bc, double t, double rel_tol, int max_terms) {
  if (!(t > 0.0)) throw std::domain_error("trace time must be positive");
  if (bc == Boundary::Free) throw std::domain_error("free boundary condition has no unit-box trace");
  if (rel_tol < std::numeric_limits<double>::epsilon())
    throw_truncation("trace (relative tolerance below double precision)", t, std::numeric_limits<double>::epsilon());

  if (t < kDualSwitchTime) {
    // Poisson-summed form: periodic (2 pi t)^{-1/2} sum_m e^{-m^2/2t};
    // Dirichlet/Neumann (2 pi t)^{-1/2} sum_m e^{-2 m^2/t} -/+ 1/2.
    double c = (bc == Boundary::Periodic) ? 0.5 : 2.0;
    double pref = 1.0 / std::sqrt(2.0 * kPi * t);
    double s = 1.0;
    for (int m = 1;; ++m) {
      s += 2.0 * std::exp(-c * m * m / t);
      double tail = 2.0 * std::exp(-c * (m + 1.0) * (m + 1.0) / t) / (1.0 - std::exp(-c * (2.0 * m + 3.0) / t));
      double value = pref * s + (bc == Boundary::Dirichlet ? -0.5 : bc == Boundary::Neumann ? 0.5 : 0.0);
      double rel = pref * tail / value;
      if (rel <= rel_tol) return {std::log(value), rel};
      if (m >= max_terms) throw_truncation("dual trace sum", t, rel);
    }
  }

  // sum over levels of mult * exp(-t (lambda_n - lambda_0)), anchored at the ground level
  SpectralBasis basis(bc, 1);
  const double a = basis.scale();
  const int k0 = basis.key(0);
  double s = 1.0;
  for (int n = 1;; ++n) {
    s += basis.multiplicity(n) * std::exp(-t * a * (basis.key(n) - k0));
    // remaining levels: keys grow at least like (n+1)^2 - k0, multiplicity <= 2
    double first = std::exp(-t * a * (basis.key(n + 1) - k0));
    double next = std::exp(-t * a * (basis.key(n + 2) - basis.key(n + 1)));
    double rel = 2.0 * first / (1.0 - next) / s;
    if (rel <= rel_tol) return {-t * a * k0 + std::log(s), rel};
    if (n >= max_terms) throw_truncation("trace eigenvalue sum", t, rel);
  }
}

Bounded eval_kernel_bounded(const BoxGeometry& g, double beta, double k, std::span<const double> x,
                            std::span<const double> y, double tol, KernelMethod method, int max_terms) {
  if (!(beta > 0.0) || !(k > 0.0)) throw std::domain_error("beta and k must be positive");
  if (!g.contains(x) || !g.contains(y)) throw std::domain_error("kernel point outside the box");
  if (!(tol > 0.0)) throw std::domain_error("tolerance must be positive");

  const double t = beta * k / (g.L * g.L);
  const double inv_vol = 1.0 / g.volume();
  // a priori bound on a 1-D factor: the diagonal value of the kernel
  const double vmax = 2.0 * (1.0 / std::sqrt(2.0 * kPi * t) + 1.0);
  const double tol1 = tol * g.volume() / (2.0 * g.d * std::pow(vmax, g.d - 1));

  double prod = 1.0, prod_hi = 1.0;
  for (int i = 0; i < g.d; ++i) {
    Bounded f = unit_kernel_1d(g.bc, t, x[i] / g.L, y[i] / g.L, tol1, method, max_terms);
    prod *= f.value;
    prod_hi *= std::abs(f.value) + f.error;
  }
  Bounded out{inv_vol * prod, inv_vol * (prod_hi - std::abs(prod))};
  if (out.error > tol) throw_truncation("kernel product", t, out.error);
  return out;
}

double eval_kernel(const BoxGeometry& g, double beta, double k, std::span<const double> x,
                   std::span<const double> y, double tol) {
  return eval_kernel_bounded(g, beta, k, x, y, tol).value;
}

KernelBoundsReport verify_kernel_bounds(const BoxGeometry& g, double beta, std::span<const long> ks,
                                        int grid_per_axis, double c_prime) {
  KernelBoundsReport rep;
  rep.geometry = g;
  rep.beta = beta;
  rep.c_prime = c_prime;
  if (!g.has_spectral_basis()) return rep;

  SpectralBasis basis(g.bc, g.d);
  const double lambda1 = basis.lambda1();
  const double gap = basis.gap();
  const double vol = g.volume();

  // grid of interior sample points (midpoints of a uniform partition)
  const int n = std::max(grid_per_axis, 1);
  long npts = 1;
  for (int i = 0; i < g.d; ++i) npts *= n;
  std::vector<std::vector<double>> pts(npts, std::vector<double>(g.d));
  for (long p = 0; p < npts; ++p) {
    long r = p;
    for (int i = 0; i < g.d; ++i) {
      pts[p][i] = g.L * (-0.5 + (r % n + 0.5) / n);
      r /= n;
    }
  }
  const BoxGeometry free_geom{g.d, g.L, Boundary::Free};

  for (long k : ks) {
    KernelBoundsRow row;
    row.k = k;
    row.t = beta * k / (g.L * g.L);
    const double decay = std::exp(-lambda1 * row.t);

    // spectral envelope: |g - main| <= L^{-d} e^{-lambda1 t} 2^d sum_{n != 1} e^{-(lambda_n - lambda1) t}
    double excited = 0.0;
    {
      // product over axes of the 1-D level sums minus the ground term
      SpectralBasis one(g.bc, 1);
      double s1 = 0.0;
      for (int lev = 0; lev < 4096; ++lev) {
        double w = one.multiplicity(lev) * std::exp(-row.t * (one.level_eigenvalue(lev) - one.level_eigenvalue(0)));
        s1 += w;
        if (lev > 2 && w < 1e-18) break;
      }
      excited = std::pow(s1, g.d) - 1.0;
    }
    const double envelope = decay * std::pow(2.0, g.d) * excited / vol;

    row.lower_bound_excess = -std::numeric_limits<double>::infinity();
    row.envelope_violation = -std::numeric_limits<double>::infinity();
    for (const auto& xp : pts) {
      std::vector<double> xu(g.d);
      for (int i = 0; i < g.d; ++i) xu[i] = xp[i] / g.L;
      const double px = basis.phi1(xu);
      for (const auto& yp : pts) {
        std::vector<double> yu(g.d);
        for (int i = 0; i < g.d; ++i) yu[i] = yp[i] / g.L;
        const double main = decay * px * basis.phi1(yu) / vol;
        Bounded val = eval_kernel_bounded(g, beta, static_cast<double>(k), xp, yp, 1e-14 * std::max(main, 1e-300) + 1e-300);
        row.lower_bound_excess = std::max(row.lower_bound_excess, (main - val.value) * vol / decay);
        row.envelope_violation = std::max(row.envelope_violation, std::abs(val.value - main) - envelope - val.error);
        double gf = eval_kernel(free_geom, beta / c_prime, static_cast<double>(k), xp, yp);
        if (gf > 0.0) row.free_domination_constant = std::max(row.free_domination_constant, val.value / gf);
      }
    }

    Bounded lt = unit_log_trace_1d(g.bc, row.t, 1e-15);
    const double tk = std::exp(g.d * lt.value);
    row.trace_lower_violation = (decay - tk) / decay - g.d * lt.error;
    row.trace_upper_constant = (tk / decay - 1.0) * std::exp(gap * row.t);
    row.small_k_deviation = std::abs(std::pow(2.0 * kPi * beta * k, 0.5 * g.d) * tk / vol - 1.0);

    rep.max_violation = std::max({rep.max_violation, row.envelope_violation, row.trace_lower_violation});
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace bose
