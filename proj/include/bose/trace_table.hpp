#pragma once

#include <iosfwd>
#include <vector>

#include "bose/geometry.hpp"

namespace bose {

/// log t_k for k = 1..N_max with per-entry relative error bounds.
struct TraceTable {
  BoxGeometry geometry;
  double beta = 1.0;
  std::vector<double> log_t;  // index k-1
  std::vector<double> err;

  long n_max() const { return static_cast<long>(log_t.size()); }
  /// log t_k; throws std::out_of_range outside 1..N_max.
  double log_trace(long k) const;
  double trace(long k) const;
};

TraceTable build_trace_table(const BoxGeometry& g, double beta, long n_max, double tol = 1e-13);

void write_trace_table(std::ostream& os, const TraceTable& t);
TraceTable read_trace_table(std::istream& is);

}  // namespace bose
