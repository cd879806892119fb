#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <numeric>
#include <sstream>

#include "bose/partition.hpp"
#include "bose/trace_table.hpp"

using namespace bose;

namespace {

TraceTable synthetic(std::vector<double> log_t) {
  TraceTable t;
  t.geometry = {1, 1.0, Boundary::Periodic};
  t.beta = 1.0;
  t.err.assign(log_t.size(), 0.0);
  t.log_t = std::move(log_t);
  return t;
}

// Number of partitions of n, by Euler's pentagonal recurrence.
long partition_count(int n) {
  std::vector<long> p(n + 1, 0);
  p[0] = 1;
  for (int m = 1; m <= n; ++m)
    for (int k = 1;; ++k) {
      int g1 = k * (3 * k - 1) / 2, g2 = k * (3 * k + 1) / 2;
      if (g1 > m) break;
      long sgn = (k % 2) ? 1 : -1;
      p[m] += sgn * p[m - g1];
      if (g2 <= m) p[m] += sgn * p[m - g2];
    }
  return p[n];
}

}  // namespace

TEST_CASE("unit traces give Z_N = 1") {
  // sum over cycle types of prod 1/(k^m m!) = 1: each permutation counted once
  PartitionTable p = build_partition_table(synthetic(std::vector<double>(200, 0.0)), 200);
  for (long n = 0; n <= 200; ++n) CHECK(p.log_Z[n] == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
}

TEST_CASE("geometric traces give Z_N = x^N") {
  const double lx = std::log(0.37);
  std::vector<double> lt(150);
  for (int k = 1; k <= 150; ++k) lt[k - 1] = k * lx;
  PartitionTable p = build_partition_table(synthetic(lt), 150);
  for (long n = 1; n <= 150; ++n) CHECK(p.log_Z[n] == doctest::Approx(n * lx).epsilon(1e-12));
}

TEST_CASE("t_1 only gives the all-singletons weight") {
  std::vector<double> lt(30, -800.0);
  lt[0] = std::log(2.0);
  PartitionTable p = build_partition_table(synthetic(lt), 30);
  for (long n = 1; n <= 30; ++n) CHECK(p.log_Z[n] == doctest::Approx(n * std::log(2.0) - std::lgamma(n + 1.0)).epsilon(1e-12));
}

TEST_CASE("enumeration counts partitions") {
  for (int n = 1; n <= 16; ++n) CHECK(static_cast<long>(enumerate_partitions(n).size()) == partition_count(n));
  for (const auto& m : enumerate_partitions(9)) {
    long total = 0;
    for (std::size_t k = 1; k < m.size(); ++k) total += static_cast<long>(k) * m[k];
    CHECK(total == 9);
  }
}

TEST_CASE("cycle-length law at n = 3 by hand") {
  std::vector<double> lt{std::log(0.8), std::log(0.5), std::log(0.3)};
  PartitionTable p = build_partition_table(synthetic(lt), 3);
  // Z_3 = t1^3/6 + t1 t2/2 + t3/3
  double z = 0.8 * 0.8 * 0.8 / 6 + 0.8 * 0.5 / 2 + 0.3 / 3;
  CHECK(std::exp(p.log_Z[3]) == doctest::Approx(z).epsilon(1e-14));
  auto q = cycle_length_distribution(p, 3);
  // P(cycle of 1 holds a given particle) = t_1 Z_2 / (3 Z_3)
  double z2 = 0.8 * 0.8 / 2 + 0.5 / 2;
  CHECK(q[0] == doctest::Approx(0.8 * z2 / (3 * z)).epsilon(1e-14));
  CHECK(q[1] == doctest::Approx(0.5 * 0.8 / (3 * z)).epsilon(1e-14));
  CHECK(q[2] == doctest::Approx(0.3 / (3 * z)).epsilon(1e-14));
}

TEST_CASE("partition table text round trip is exact") {
  PartitionTable p = build_partition_table(build_trace_table({3, 4.0, Boundary::Periodic}, 0.8, 64), 64);
  std::stringstream ss;
  write_partition_table(ss, p);
  PartitionTable q = read_partition_table(ss);
  CHECK(q.log_Z == p.log_Z);
  CHECK(q.geometry.L == p.geometry.L);
  CHECK(q.beta == p.beta);
}

TEST_CASE("partition weight of a single cycle") {
  std::vector<double> lt{0.0, 0.0, std::log(6.0)};
  Partition m{0, 0, 0, 1};
  CHECK(log_partition_weight(m, lt) == doctest::Approx(std::log(2.0)));
}
