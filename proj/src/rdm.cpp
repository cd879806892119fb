#include "bose/rdm.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "bose/special_functions.hpp"
#include "bose/thermo.hpp"

namespace bose {

RdmKernel::RdmKernel(const PartitionTable& table, long N)
    : geometry_(table.geometry), beta_(table.beta), N_(N) {
  if (N < 1) throw std::domain_error("density matrix needs N >= 1");
  if (N > table.n_max()) throw std::out_of_range("density matrix: N exceeds partition table");
  const double ln = std::log(static_cast<double>(N));
  r_cut_ = static_cast<long>(std::ceil(std::pow(static_cast<double>(N), 2.0 / geometry_.d) * ln * ln));
  w_.resize(N);
  log_t_.assign(table.log_t.begin(), table.log_t.begin() + N);
  for (long r = 1; r <= N; ++r) w_[r - 1] = std::exp(table.log_Z[N - r] - table.log_Z[N]);
  suffix_.resize(N);
  double s = 0.0;
  for (long r = N; r >= 1; --r) suffix_[r - 1] = (s += w_[r - 1]);
}

double RdmKernel::kernel_sup(long r) const {
  if (geometry_.bc == Boundary::Free) return std::pow(2.0 * kPi * beta_ * r, -0.5 * geometry_.d);
  // |phi_n|^2 <= 2 on every axis
  return std::pow(2.0, geometry_.d) * std::exp(log_t_[r - 1]) / geometry_.volume();
}

Bounded eval_rdm_bounded(const RdmKernel& k, std::span<const double> x, std::span<const double> y) {
  const BoxGeometry& g = k.geometry();
  if (!g.contains(x) || !g.contains(y)) throw std::domain_error("density matrix point outside the box");
  Bounded out;
  const auto& w = k.weights();
  for (long r = 1; r <= k.N(); ++r) {
    double tol = std::max(1e-13 * k.kernel_sup(r), 1e-300);
    Bounded gr = eval_kernel_bounded(g, k.beta(), static_cast<double>(r), x, y, tol);
    out.value += w[r - 1] * gr.value;
    out.error += w[r - 1] * gr.error;
    if (r > k.r_cut() && r < k.N()) {
      // sup g is nonincreasing in r, so this bounds every remaining term
      double rest = k.kernel_sup(r + 1) * k.weight_suffix(r + 1);
      if (rest < 1e-16 * out.value) {
        out.error += rest;
        break;
      }
    }
  }
  return out;
}

double eval_rdm(const RdmKernel& k, std::span<const double> x, std::span<const double> y) {
  return eval_rdm_bounded(k, x, y).value;
}

double rdm_trace_algebraic(const RdmKernel& k) {
  double s = 0.0;
  for (long r = 1; r <= k.N(); ++r) s += k.weights()[r - 1] * std::exp(k.log_traces()[r - 1]);
  return s;
}

double rdm_trace_quadrature(const RdmKernel& k, int panels) {
  using GL = boost::math::quadrature::gauss<double, 16>;
  const BoxGeometry& g = k.geometry();
  std::vector<double> nodes, weights;
  for (int p = 0; p < panels; ++p) {
    const double a = -0.5 + static_cast<double>(p) / panels, half = 0.5 / panels;
    auto add = [&](double z, double wt) {
      nodes.push_back(a + half * (1.0 + z));
      weights.push_back(half * wt);
    };
    for (std::size_t i = 0; i < GL::abscissa().size(); ++i) {
      add(GL::abscissa()[i], GL::weights()[i]);
      if (GL::abscissa()[i] != 0.0) add(-GL::abscissa()[i], GL::weights()[i]);
    }
  }
  double total = 0.0;
  for (long r = 1; r <= k.N(); ++r) {
    const double t = k.beta() * r / (g.L * g.L);
    double q = 0.0;  // int over the unit interval of the 1-D diagonal
    for (std::size_t i = 0; i < nodes.size(); ++i)
      q += weights[i] * unit_kernel_1d(g.bc, t, nodes[i], nodes[i], 1e-15).value;
    total += k.weights()[r - 1] * std::pow(q, g.d);
  }
  return total;
}

namespace {

struct Tensor {
  std::vector<int> dims;
  std::vector<double> data;
};

// out = B applied along `axis`, B is rows x dims[axis], row-major
Tensor mode_product(const Tensor& in, int axis, const std::vector<double>& B, int rows) {
  const int cols = in.dims[axis];
  long outer = 1, inner = 1;
  for (int i = 0; i < axis; ++i) outer *= in.dims[i];
  for (std::size_t i = axis + 1; i < in.dims.size(); ++i) inner *= in.dims[i];
  Tensor out;
  out.dims = in.dims;
  out.dims[axis] = rows;
  out.data.assign(outer * rows * inner, 0.0);
  for (long o = 0; o < outer; ++o) {
    const double* src = in.data.data() + o * cols * inner;
    double* dst = out.data.data() + o * rows * inner;
    for (int r = 0; r < rows; ++r) {
      double* drow = dst + r * inner;
      for (int c = 0; c < cols; ++c) {
        const double b = B[static_cast<long>(r) * cols + c];
        if (b == 0.0) continue;
        const double* srow = src + c * inner;
        for (long i = 0; i < inner; ++i) drow[i] += b * srow[i];
      }
    }
  }
  return out;
}

double midpoint(int i, int G) { return -0.5 + (i + 0.5) / G; }

// Nystrom operator A = G^{-d} Phi C Phi^T for spectral bcs, or the direct
// r-sum of Gaussian tensor products for the free bc.
class NystromOperator {
 public:
  NystromOperator(const RdmKernel& k, int G) : k_(k), G_(G), d_(k.geometry().d) {
    const BoxGeometry& g = k.geometry();
    if (g.has_spectral_basis()) {
      SpectralBasis basis(g.bc, d_, 1e-13);
      int levels = basis.levels_needed(k.beta() / (g.L * g.L));
      modes_ = basis.modes(levels);
      M_ = static_cast<int>(modes_.size());
      phi_.resize(static_cast<long>(G) * M_);
      for (int i = 0; i < G; ++i)
        for (int m = 0; m < M_; ++m)
          phi_[static_cast<long>(i) * M_ + m] = basis.eigenfunction(modes_[m].level, modes_[m].component, midpoint(i, G));
      phiT_.resize(phi_.size());
      for (int i = 0; i < G; ++i)
        for (int m = 0; m < M_; ++m) phiT_[static_cast<long>(m) * G + i] = phi_[static_cast<long>(i) * M_ + m];
      build_coefficients(basis);
    } else {
      const double h = g.L / G;
      gauss_.resize(k.N());
      for (long r = 1; r <= k.N(); ++r) {
        auto& K = gauss_[r - 1];
        K.resize(static_cast<long>(G) * G);
        const double t = k.beta() * r;
        for (int i = 0; i < G; ++i)
          for (int j = 0; j < G; ++j) {
            double z = (i - j) * h;
            K[static_cast<long>(i) * G + j] = h * std::exp(-z * z / (2.0 * t)) / std::sqrt(2.0 * kPi * t);
          }
      }
    }
  }

  long size() const {
    long n = 1;
    for (int i = 0; i < d_; ++i) n *= G_;
    return n;
  }

  std::vector<double> apply(const std::vector<double>& v) const {
    Tensor t{std::vector<int>(d_, G_), v};
    if (k_.geometry().has_spectral_basis()) {
      for (int a = 0; a < d_; ++a) t = mode_product(t, a, phiT_, M_);
      for (std::size_t i = 0; i < t.data.size(); ++i) t.data[i] *= coeff_[i];
      for (int a = 0; a < d_; ++a) t = mode_product(t, a, phi_, G_);
      return t.data;
    }
    std::vector<double> out(v.size(), 0.0);
    for (long r = 1; r <= k_.N(); ++r) {
      Tensor s = t;
      for (int a = 0; a < d_; ++a) s = mode_product(s, a, gauss_[r - 1], G_);
      const double w = k_.weights()[r - 1];
      for (std::size_t i = 0; i < out.size(); ++i) out[i] += w * s.data[i];
    }
    return out;
  }

 private:
  void build_coefficients(const SpectralBasis& basis) {
    const BoxGeometry& g = k_.geometry();
    const double scale = basis.scale();
    const int key0 = basis.key(0);
    const double lmin = scale * key0 * d_;
    const double step = k_.beta() / (g.L * g.L);
    // w_hat_r = w_r e^{-r beta lambda_min / L^2}
    std::vector<double> what(k_.N());
    for (long r = 1; r <= k_.N(); ++r) what[r - 1] = k_.weights()[r - 1] * std::exp(-r * step * lmin);
    const double norm = std::pow(static_cast<double>(G_), -d_);
    std::unordered_map<int, double> cache;
    auto c_of = [&](int keysum) {
      auto it = cache.find(keysum);
      if (it != cache.end()) return it->second;
      const double z = std::exp(-step * scale * (keysum - d_ * key0));
      double h = 0.0;
      for (long r = k_.N(); r >= 1; --r) h = h * z + what[r - 1];
      h *= z * norm;
      cache.emplace(keysum, h);
      return h;
    };
    long total = 1;
    for (int i = 0; i < d_; ++i) total *= M_;
    coeff_.resize(total);
    std::vector<int> idx(d_, 0);
    for (long f = 0; f < total; ++f) {
      int ks = 0;
      for (int a = 0; a < d_; ++a) ks += modes_[idx[a]].key;
      coeff_[f] = c_of(ks);
      for (int a = d_ - 1; a >= 0; --a) {
        if (++idx[a] < M_) break;
        idx[a] = 0;
      }
    }
  }

  const RdmKernel& k_;
  int G_, d_;
  int M_ = 0;
  std::vector<SpectralBasis::Mode> modes_;
  std::vector<double> phi_, phiT_;  // G x M and M x G
  std::vector<double> coeff_;
  std::vector<std::vector<double>> gauss_;
};

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

std::vector<double> sampled_ground_state(const RdmKernel& k, int G) {
  const BoxGeometry& g = k.geometry();
  long n = 1;
  for (int i = 0; i < g.d; ++i) n *= G;
  std::vector<double> v(n, 1.0);
  if (!g.has_spectral_basis()) return v;
  SpectralBasis basis(g.bc, g.d);
  std::vector<double> u(g.d);
  std::vector<int> idx(g.d, 0);
  for (long f = 0; f < n; ++f) {
    for (int a = 0; a < g.d; ++a) u[a] = midpoint(idx[a], G);
    v[f] = basis.phi1(u);
    for (int a = g.d - 1; a >= 0; --a) {
      if (++idx[a] < G) break;
      idx[a] = 0;
    }
  }
  return v;
}

}  // namespace

double continuum_principal_eigenvalue(const RdmKernel& k) {
  const BoxGeometry& g = k.geometry();
  double s = 0.0;
  if (g.has_spectral_basis()) {
    const double l1 = SpectralBasis(g.bc, g.d).lambda1();
    for (long r = 1; r <= k.N(); ++r) s += k.weights()[r - 1] * std::exp(-r * k.beta() * l1 / (g.L * g.L));
    return s;
  }
  // <1, G_t 1> / L on an interval, per axis
  for (long r = 1; r <= k.N(); ++r) {
    const double t = k.beta() * r;
    const double p = (g.L * std::erf(g.L / std::sqrt(2.0 * t)) -
                      std::sqrt(2.0 * t / kPi) * (-std::expm1(-g.L * g.L / (2.0 * t)))) /
                     g.L;
    s += k.weights()[r - 1] * std::pow(p, g.d);
  }
  return s;
}

EigenResult principal_eigenvalue(const RdmKernel& k, int grid, double rel_tol, int max_iter) {
  if (grid < 8) throw std::domain_error("Nystrom grid needs at least 8 points per axis");
  NystromOperator A(k, grid);
  EigenResult res;
  res.grid = grid;
  res.continuum = continuum_principal_eigenvalue(k);
  std::vector<double> v = sampled_ground_state(k, grid);
  double nv = std::sqrt(dot(v, v));
  for (double& x : v) x /= nv;
  for (int it = 1; it <= max_iter; ++it) {
    std::vector<double> w = A.apply(v);
    const double lambda = dot(v, w);
    if (it == 1) res.lower_bound = lambda;
    double r2 = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) r2 += (w[i] - lambda * v[i]) * (w[i] - lambda * v[i]);
    res.sigma = lambda;
    res.residual = std::sqrt(r2);
    res.iterations = it;
    if (res.residual <= rel_tol * std::abs(lambda)) {
      res.converged = true;
      break;
    }
    const double nw = std::sqrt(dot(w, w));
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = w[i] / nw;
  }
  return res;
}

EigenResult resolve_principal_eigenvalue(const RdmKernel& k, int grid0, int grid_max, double change) {
  EigenResult prev = principal_eigenvalue(k, grid0);
  for (int G = 2 * grid0; G <= grid_max; G *= 2) {
    EigenResult cur = principal_eigenvalue(k, G);
    bool done = std::abs(cur.sigma - prev.sigma) < change * std::abs(cur.sigma);
    prev = cur;
    if (done) break;
  }
  return prev;
}

std::vector<ProfilePoint> rdm_profile(const RdmKernel& k, int points) {
  const BoxGeometry& g = k.geometry();
  std::vector<ProfilePoint> out;
  std::vector<double> x(g.d, 0.0), y(g.d, 0.0);
  for (int i = 1; i <= points; ++i) {
    const double r = 0.5 * g.L * i / points;
    y[0] = r;
    out.push_back({r, eval_rdm(k, x, y)});
  }
  return out;
}

PowerFit fit_power_profile(const std::vector<ProfilePoint>& p, int d, double r_lo, double r_hi) {
  // least squares in the basis {1, r^{2-d}}
  double n = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::vector<std::pair<double, double>> pts;
  for (const auto& q : p)
    if (q.r >= r_lo && q.r <= r_hi) pts.push_back({std::pow(q.r, 2.0 - d), q.gamma});
  PowerFit f;
  f.used = static_cast<int>(pts.size());
  if (pts.size() < 3) return f;
  for (auto [x, y] : pts) n += 1, sx += x, sy += y, sxx += x * x, sxy += x * y;
  f.A = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  f.c0 = (sy - f.A * sx) / n;
  const double mean = sy / n;
  double ss_res = 0, ss_tot = 0;
  for (auto [x, y] : pts) {
    ss_res += (y - f.c0 - f.A * x) * (y - f.c0 - f.A * x);
    ss_tot += (y - mean) * (y - mean);
  }
  f.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  return f;
}

ExpFit fit_exponential_profile(const std::vector<ProfilePoint>& p, double r_lo, double r_hi) {
  double n = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::vector<std::pair<double, double>> pts;
  for (const auto& q : p)
    if (q.r >= r_lo && q.r <= r_hi && q.gamma > 0.0) pts.push_back({q.r, std::log(q.gamma)});
  ExpFit f;
  f.used = static_cast<int>(pts.size());
  if (pts.size() < 3) return f;
  for (auto [x, y] : pts) n += 1, sx += x, sy += y, sxx += x * x, sxy += x * y;
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double icpt = (sy - slope * sx) / n;
  f.rate = -slope;
  f.amp = std::exp(icpt);
  const double mean = sy / n;
  double ss_res = 0, ss_tot = 0;
  for (auto [x, y] : pts) {
    ss_res += (y - icpt - slope * x) * (y - icpt - slope * x);
    ss_tot += (y - mean) * (y - mean);
  }
  f.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  return f;
}

FarField far_field(const RdmKernel& k) {
  const BoxGeometry& g = k.geometry();
  std::vector<double> x(g.d, 0.0), y(g.d, 0.0);
  x[0] = -0.25 * g.L;
  y[0] = 0.25 * g.L;
  FarField f;
  f.gamma = eval_rdm(k, x, y);
  if (g.has_spectral_basis()) {
    SpectralBasis b(g.bc, g.d);
    std::vector<double> ux(g.d, 0.0), uy(g.d, 0.0);
    ux[0] = -0.25;
    uy[0] = 0.25;
    f.phi_product = b.phi1(ux) * b.phi1(uy);
  } else {
    f.phi_product = 1.0;
  }
  return f;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::ODLRO: return "ODLRO";
    case Verdict::NoODLRO: return "no-ODLRO";
    case Verdict::Inconclusive: break;
  }
  return "inconclusive";
}

OdlroReport odlro_sweep(Boundary bc, int d, double beta, double rho, const std::vector<long>& N_sequence,
                        int grid0, int grid_max) {
  if (d <= 2) throw std::domain_error("ODLRO sweep needs d >= 3 (rho_c is infinite for d <= 2)");
  if (!(rho > 0.0)) throw std::domain_error("density must be positive");
  if (N_sequence.empty()) throw std::domain_error("empty N sequence");
  OdlroReport rep;
  rep.bc = bc;
  rep.d = d;
  rep.beta = beta;
  rep.rho = rho;
  rep.rho_c = critical_density(d, beta);
  rep.supercritical = rho > rep.rho_c;
  PartitionTable table;
  for (long N : N_sequence) {
    BoxGeometry g = geometry_for_density(d, rho, N, bc);
    table = build_partition_table(build_trace_table(g, beta, N), N);
    RdmKernel k(table, N);
    OdlroRow row;
    row.N = N;
    row.L = g.L;
    row.volume = g.volume();
    row.eig = resolve_principal_eigenvalue(k, grid0, grid_max);
    row.sigma_over_volume = row.eig.sigma / row.volume;
    if (rep.supercritical) {
      row.target = rho - rep.rho_c;
      row.rel_error = std::abs(row.sigma_over_volume - row.target) / row.target;
    }
    row.plateau = far_field(k);
    row.plateau_main = (rep.supercritical ? rho - rep.rho_c : 0.0) * row.plateau.phi_product;
    std::vector<ProfilePoint> prof = rdm_profile(k, 64);
    const double sb = std::sqrt(beta);
    row.power = fit_power_profile(prof, d, 5.0 * sb, 0.25 * g.L);
    row.exponential = fit_exponential_profile(prof, 2.0 * sb, g.L / 3.0);
    rep.rows.push_back(row);
  }

  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const auto& r : rep.rows) lo = std::min(lo, r.eig.sigma), hi = std::max(hi, r.eig.sigma);
  rep.variation = (hi - lo) / lo;
  if (rep.supercritical) {
    rep.within_tolerance = rep.rows.back().rel_error <= 0.10;
    rep.monotone_trend = true;
    for (std::size_t i = 1; i < rep.rows.size(); ++i)
      rep.monotone_trend = rep.monotone_trend && rep.rows[i].rel_error < rep.rows[i - 1].rel_error;
    rep.verdict = rep.within_tolerance && rep.monotone_trend ? Verdict::ODLRO : Verdict::Inconclusive;
  } else {
    rep.bounded = rep.variation < 0.20;
    rep.fits_ok = true;
    for (const auto& r : rep.rows) rep.fits_ok = rep.fits_ok && r.exponential.rate > 0.0 && r.exponential.r2 > 0.98;
    rep.verdict = rep.bounded && rep.fits_ok ? Verdict::NoODLRO : Verdict::Inconclusive;
  }
  return rep;
}

}  // namespace bose
