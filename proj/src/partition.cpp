#include "bose/partition.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "bose/special_functions.hpp"

namespace bose {

double PartitionTable::max_residual() const {
  double r = 0.0;
  for (double v : residual) r = std::max(r, v);
  return r;
}

PartitionTable build_partition_table(const TraceTable& traces, long N) {
  if (N < 0) throw std::domain_error("N must be non-negative");
  if (N > traces.n_max())
    throw std::out_of_range("partition table: N = " + std::to_string(N) + " exceeds trace table length " +
                            std::to_string(traces.n_max()));
  PartitionTable p;
  p.geometry = traces.geometry;
  p.beta = traces.beta;
  p.log_t.assign(traces.log_t.begin(), traces.log_t.begin() + N);
  p.log_Z.assign(N + 1, 0.0);
  p.residual.assign(N + 1, 0.0);

  std::vector<double> terms;
  terms.reserve(N);
  for (long n = 1; n <= N; ++n) {
    terms.clear();
    for (long k = 1; k <= n; ++k) terms.push_back(p.log_t[k - 1] + p.log_Z[n - k]);
    const double lse = log_sum_exp(terms);
    p.log_Z[n] = lse - std::log(static_cast<double>(n));

    // independent re-summation in reverse order, relative to the stored value
    const double ref = p.log_Z[n] + std::log(static_cast<double>(n));
    double s = 0.0;
    for (long k = n; k >= 1; --k) s += std::exp(terms[k - 1] - ref);
    p.residual[n] = std::abs(s - 1.0);
  }
  return p;
}

std::vector<double> cycle_length_distribution(const PartitionTable& table, long n) {
  if (n < 1) throw std::domain_error("cycle length distribution needs n >= 1");
  if (n > table.n_max()) throw std::out_of_range("n exceeds partition table");
  std::vector<double> p(n);
  const double norm = std::log(static_cast<double>(n)) + table.log_Z[n];
  for (long k = 1; k <= n; ++k) p[k - 1] = std::exp(table.log_t[k - 1] + table.log_Z[n - k] - norm);
  return p;
}

void write_partition_table(std::ostream& os, const PartitionTable& t) {
  os << "# d L bc beta N\n";
  os << std::setprecision(17);
  os << "# " << t.geometry.d << ' ' << t.geometry.L << ' ' << to_string(t.geometry.bc) << ' ' << t.beta << ' '
     << t.n_max() << '\n';
  for (long n = 0; n <= t.n_max(); ++n) os << n << ' ' << t.log_Z[n] << ' ' << t.residual[n] << '\n';
  // traces are needed to rebuild cycle distributions
  os << "# k log_t\n";
  for (long k = 1; k <= t.n_max(); ++k) os << k << ' ' << t.log_t[k - 1] << '\n';
}

PartitionTable read_partition_table(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("# d L bc beta N", 0) != 0)
    throw std::runtime_error("partition table: missing column header");
  if (!std::getline(is, line) || line.empty() || line[0] != '#')
    throw std::runtime_error("partition table: missing parameter line");
  std::istringstream ps(line.substr(1));
  PartitionTable t;
  std::string bc;
  long n = 0;
  if (!(ps >> t.geometry.d >> t.geometry.L >> bc >> t.beta >> n))
    throw std::runtime_error("partition table: bad parameter line");
  t.geometry.bc = parse_boundary(bc);
  t.log_Z.resize(n + 1);
  t.residual.resize(n + 1);
  t.log_t.resize(n);
  for (long i = 0; i <= n; ++i) {
    long idx = -1;
    if (!(is >> idx >> t.log_Z[i] >> t.residual[i]) || idx != i)
      throw std::runtime_error("partition table: bad row " + std::to_string(i));
  }
  is >> std::ws;
  if (!std::getline(is, line) || line.rfind("# k log_t", 0) != 0)
    throw std::runtime_error("partition table: missing trace section");
  for (long k = 1; k <= n; ++k) {
    long idx = 0;
    if (!(is >> idx >> t.log_t[k - 1]) || idx != k)
      throw std::runtime_error("partition table: bad trace row " + std::to_string(k));
  }
  return t;
}

namespace {

void enumerate_rec(int remaining, int max_part, Partition& cur, std::vector<Partition>& out) {
  if (remaining == 0) {
    out.push_back(cur);
    return;
  }
  for (int k = std::min(remaining, max_part); k >= 1; --k) {
    ++cur[k];
    enumerate_rec(remaining - k, k, cur, out);
    --cur[k];
  }
}

}  // namespace

std::vector<Partition> enumerate_partitions(int n) {
  if (n < 0) throw std::domain_error("cannot enumerate partitions of a negative integer");
  std::vector<Partition> out;
  Partition cur(n + 1, 0);
  enumerate_rec(n, n, cur, out);
  return out;
}

double log_partition_weight(const Partition& m, const std::vector<double>& log_t) {
  double w = 0.0;
  for (std::size_t k = 1; k < m.size(); ++k) {
    if (m[k] == 0) continue;
    if (k > log_t.size()) throw std::out_of_range("partition part exceeds trace table");
    w += m[k] * (log_t[k - 1] - std::log(static_cast<double>(k))) - std::lgamma(m[k] + 1.0);
  }
  return w;
}

}  // namespace bose
