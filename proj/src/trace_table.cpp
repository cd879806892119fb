#include "bose/trace_table.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "bose/special_functions.hpp"
#include "bose/spectral_kernel.hpp"

namespace bose {

double TraceTable::log_trace(long k) const {
  if (k < 1 || k > n_max()) throw std::out_of_range("trace index " + std::to_string(k) + " outside table");
  return log_t[k - 1];
}

double TraceTable::trace(long k) const { return std::exp(log_trace(k)); }

TraceTable build_trace_table(const BoxGeometry& g, double beta, long n_max, double tol) {
  if (n_max < 1) throw std::domain_error("N_max must be at least 1");
  if (!(beta > 0.0)) throw std::domain_error("beta must be positive");
  if (!(tol > 0.0)) throw std::domain_error("tolerance must be positive");
  make_geometry(g.d, g.L, g.bc);

  TraceTable t;
  t.geometry = g;
  t.beta = beta;
  t.log_t.resize(n_max);
  t.err.resize(n_max);
  const double log_vol = g.d * std::log(g.L);
  for (long k = 1; k <= n_max; ++k) {
    if (g.bc == Boundary::Free) {
      t.log_t[k - 1] = log_vol - 0.5 * g.d * std::log(2.0 * kPi * beta * k);
      t.err[k - 1] = 0.0;
      continue;
    }
    Bounded lt = unit_log_trace_1d(g.bc, beta * k / (g.L * g.L), tol / g.d);
    t.log_t[k - 1] = g.d * lt.value;
    t.err[k - 1] = g.d * lt.error;
  }
  return t;
}

void write_trace_table(std::ostream& os, const TraceTable& t) {
  os << "# d L bc beta N_max\n";
  os << std::setprecision(17);
  os << "# " << t.geometry.d << ' ' << t.geometry.L << ' ' << to_string(t.geometry.bc) << ' ' << t.beta << ' '
     << t.n_max() << '\n';
  for (long k = 1; k <= t.n_max(); ++k) os << k << ' ' << t.log_t[k - 1] << ' ' << t.err[k - 1] << '\n';
}

TraceTable read_trace_table(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("# d L bc beta N_max", 0) != 0)
    throw std::runtime_error("trace table: missing column header");
  if (!std::getline(is, line) || line.empty() || line[0] != '#')
    throw std::runtime_error("trace table: missing parameter line");
  std::istringstream ps(line.substr(1));
  TraceTable t;
  std::string bc;
  long n = 0;
  if (!(ps >> t.geometry.d >> t.geometry.L >> bc >> t.beta >> n)) throw std::runtime_error("trace table: bad parameter line");
  t.geometry.bc = parse_boundary(bc);
  t.log_t.resize(n);
  t.err.resize(n);
  for (long k = 1; k <= n; ++k) {
    long idx = 0;
    if (!(is >> idx >> t.log_t[k - 1] >> t.err[k - 1]) || idx != k)
      throw std::runtime_error("trace table: bad row " + std::to_string(k));
  }
  return t;
}

}  // namespace bose
