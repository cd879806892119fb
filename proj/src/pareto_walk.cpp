#include "bose/pareto_walk.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <set>
#include <stdexcept>

#include "bose/special_functions.hpp"

namespace bose {

ParetoWalkModel::ParetoWalkModel(int dim) : d(dim), s(0.5 * dim + 1.0) {
  if (dim < 3) throw std::domain_error("Pareto walk needs d >= 3 for a finite mean");
  zeta_s = zeta(s);
  a = zeta(0.5 * dim) / zeta_s;
}

double ParetoWalkModel::pmf(long j) const { return j < 1 ? 0.0 : std::pow(static_cast<double>(j), -s) / zeta_s; }

double ParetoWalkModel::tail_mass(long J) const {
  // Euler-Maclaurin from J+1: integral + f/2 - f'/12 + f'''/720
  const double x = J + 1.0;
  double v = std::pow(x, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(x, -s) + s / 12.0 * std::pow(x, -s - 1.0) -
             s * (s + 1.0) * (s + 2.0) / 720.0 * std::pow(x, -s - 3.0);
  return v / zeta_s;
}

long ParetoWalkModel::truncation_point(double tol) const {
  long J = static_cast<long>(std::ceil(std::pow(tol * zeta_s * (s - 1.0), 1.0 / (1.0 - s))));
  while (J > 1 && tail_mass(J - 1) < tol) --J;
  while (tail_mass(J) >= tol) ++J;
  return J;
}

namespace {

class Convolver {
 public:
  explicit Convolver(long M) : M_(M) {
    n_ = 1;
    while (n_ < 2 * (M + 1)) n_ <<= 1;
    real_ = fftw_alloc_real(n_);
    spec_a_ = fftw_alloc_complex(n_ / 2 + 1);
    spec_b_ = fftw_alloc_complex(n_ / 2 + 1);
    fwd_ = fftw_plan_dft_r2c_1d(static_cast<int>(n_), real_, spec_a_, FFTW_ESTIMATE);
    bwd_ = fftw_plan_dft_c2r_1d(static_cast<int>(n_), spec_a_, real_, FFTW_ESTIMATE);
  }
  ~Convolver() {
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
    fftw_free(real_);
    fftw_free(spec_a_);
    fftw_free(spec_b_);
  }
  Convolver(const Convolver&) = delete;
  Convolver& operator=(const Convolver&) = delete;

  std::vector<double> operator()(const std::vector<double>& x, const std::vector<double>& y) {
    load(x);
    fftw_execute_dft_r2c(fwd_, real_, spec_b_);
    load(y);
    fftw_execute_dft_r2c(fwd_, real_, spec_a_);
    for (long i = 0; i <= n_ / 2; ++i) {
      std::complex<double> p = std::complex<double>(spec_a_[i][0], spec_a_[i][1]) *
                               std::complex<double>(spec_b_[i][0], spec_b_[i][1]);
      spec_a_[i][0] = p.real();
      spec_a_[i][1] = p.imag();
    }
    fftw_execute_dft_c2r(bwd_, spec_a_, real_);
    std::vector<double> out(M_ + 1);
    for (long i = 0; i <= M_; ++i) out[i] = std::max(0.0, real_[i] / static_cast<double>(n_));
    return out;
  }

 private:
  void load(const std::vector<double>& v) {
    std::fill(real_, real_ + n_, 0.0);
    std::copy(v.begin(), v.end(), real_);
  }
  long M_, n_;
  double* real_;
  fftw_complex *spec_a_, *spec_b_;
  fftw_plan fwd_, bwd_;
};

}  // namespace

std::vector<double> pareto_sum_pmf(const ParetoWalkModel& model, long n, long M) {
  if (n < 1) throw std::domain_error("number of steps must be >= 1");
  if (M < 1) throw std::domain_error("support must be >= 1");
  std::vector<double> base(M + 1, 0.0);
  for (long j = 1; j <= M; ++j) base[j] = model.pmf(j);
  if (n == 1) return base;
  Convolver conv(M);
  std::vector<double> result;
  bool have = false;
  for (long e = n;;) {
    if (e & 1) {
      result = have ? conv(result, base) : base;
      have = true;
    }
    e >>= 1;
    if (!e) break;
    base = conv(base, base);
  }
  // S_n >= n; clears FFT round-off below the support
  std::fill(result.begin(), result.begin() + std::min(n, M + 1), 0.0);
  return result;
}

ParetoLcltReport pareto_lclt_check(const ParetoWalkModel& model, long n, const std::vector<long>& ks) {
  ParetoLcltReport rep;
  rep.n = n;
  rep.a = model.a;
  const double ln = std::log(static_cast<double>(n));
  rep.window_lo = std::max<long>(1, static_cast<long>(std::ceil(std::pow(static_cast<double>(n), 2.0 / model.d) * ln)));
  rep.window_hi = 4 * n;
  const long base = static_cast<long>(std::floor(model.a * n));
  long kmax = rep.window_hi;
  for (long k : ks) kmax = std::max(kmax, k);
  rep.support = base + kmax;
  rep.step_deficit = model.tail_mass(rep.support);
  std::vector<double> p = pareto_sum_pmf(model, n, rep.support);
  for (long k : ks) {
    if (k < 1) continue;
    ParetoLcltRow row;
    row.k = k;
    row.m = base + k;
    row.p = p[row.m];
    row.ratio = row.p / (n * model.pmf(k));
    row.in_window = k >= rep.window_lo && k <= rep.window_hi;
    if (row.in_window) rep.max_deviation = std::max(rep.max_deviation, std::abs(row.ratio - 1.0));
    rep.rows.push_back(row);
  }
  return rep;
}

ParetoLcltReport pareto_lclt_check(const ParetoWalkModel& model, long n) {
  const double ln = std::log(static_cast<double>(std::max<long>(n, 2)));
  const double lo = std::max(1.0, std::ceil(std::pow(static_cast<double>(n), 2.0 / model.d) * ln));
  const double hi = 4.0 * n;
  std::set<long> ks;
  for (int i = 0; i < 40; ++i) ks.insert(static_cast<long>(std::round(lo * std::pow(hi / lo, i / 39.0))));
  for (double f : {0.1, 0.25, 0.5})
    if (f * lo >= 1.0) ks.insert(static_cast<long>(f * lo));
  return pareto_lclt_check(model, n, std::vector<long>(ks.begin(), ks.end()));
}

}  // namespace bose
