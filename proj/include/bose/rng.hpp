#pragma once

#include <array>
#include <cstdint>
#include <functional>

namespace bose {

/// Philox4x32-10 counter-based generator. A (seed, stream) pair selects an
/// independent stream; the output depends only on the pair and the number
/// of values drawn, so sharded runs reproduce bitwise.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint32_t next_u32();
  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform on (0, 1].
  double uniform_pos() { return 1.0 - uniform(); }

  /// Inversion for mean < 10, transformed rejection (PTRD) otherwise.
  long poisson(double mean);
  /// P(X = j) proportional to j^{-s}, s > 1 (rejection from a continuous Pareto).
  long zeta(double s);

 private:
  void refill();
  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> ctr_{};
  std::array<std::uint32_t, 4> buf_{};
  int pos_ = 4;
};

/// Runs fn(shard) for shard = 0..n_shards-1 on up to `workers` threads
/// (0 = hardware concurrency). Callers merge results in shard order.
void for_each_shard(int n_shards, const std::function<void(int)>& fn, int workers = 0);

}  // namespace bose
