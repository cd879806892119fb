#pragma once

#include <iosfwd>
#include <vector>

#include "bose/geometry.hpp"
#include "bose/trace_table.hpp"

namespace bose {

/// log Z_0..log Z_N of the ideal gas, with the traces that produced them.
struct PartitionTable {
  BoxGeometry geometry;
  double beta = 1.0;
  std::vector<double> log_Z;     // log_Z[0] = 0
  std::vector<double> log_t;     // log t_k at index k-1, k = 1..N
  std::vector<double> residual;  // recursion residual per n, relative

  long n_max() const { return static_cast<long>(log_Z.size()) - 1; }
  double max_residual() const;
};

/// Z_n = (1/n) sum_{k<=n} t_k Z_{n-k} evaluated with log-sum-exp.
/// Throws std::out_of_range when the trace table is shorter than N.
PartitionTable build_partition_table(const TraceTable& traces, long N);

/// p(k) = t_k Z_{n-k} / (n Z_n) for k = 1..n (index k-1).
std::vector<double> cycle_length_distribution(const PartitionTable& table, long n);

void write_partition_table(std::ostream& os, const PartitionTable& t);
PartitionTable read_partition_table(std::istream& is);

/// Occupation vector m with m[k] = number of k-cycles, m[0] unused.
using Partition = std::vector<int>;

/// All partitions of n in reverse lexicographic order of their parts.
std::vector<Partition> enumerate_partitions(int n);

/// log of prod_k t_k^{m_k} / (k^{m_k} m_k!) for a partition.
double log_partition_weight(const Partition& m, const std::vector<double>& log_t);

}  // namespace bose
