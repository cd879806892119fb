#include "bose/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>
#include <vector>

namespace bose {
namespace {

constexpr std::uint32_t kM0 = 0xD2511F53u, kM1 = 0xCD9E8D57u;
constexpr std::uint32_t kW0 = 0x9E3779B9u, kW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

std::array<std::uint32_t, 4> philox(std::array<std::uint32_t, 4> c, std::array<std::uint32_t, 2> k) {
  for (int r = 0; r < 10; ++r) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kM0, c[0], hi0, lo0);
    mulhilo(kM1, c[2], hi1, lo1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    k[0] += kW0;
    k[1] += kW1;
  }
  return c;
}

}  // namespace

Rng::Rng(std::uint64_t seed, std::uint64_t stream)
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)} {
  ctr_[2] = static_cast<std::uint32_t>(stream);
  ctr_[3] = static_cast<std::uint32_t>(stream >> 32);
}

void Rng::refill() {
  buf_ = philox(ctr_, key_);
  if (++ctr_[0] == 0) ++ctr_[1];
  pos_ = 0;
}

std::uint32_t Rng::next_u32() {
  if (pos_ == 4) refill();
  return buf_[pos_++];
}

std::uint64_t Rng::next_u64() {
  std::uint64_t hi = next_u32();
  return (hi << 32) | next_u32();
}

double Rng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

long Rng::poisson(double mean) {
  if (!(mean >= 0.0) || !std::isfinite(mean)) throw std::domain_error("Poisson mean must be finite and >= 0");
  if (mean == 0.0) return 0;
  if (mean < 10.0) {
    double u = uniform();
    double p = std::exp(-mean), cdf = p;
    long k = 0;
    while (u > cdf) {
      ++k;
      p *= mean / k;
      cdf += p;
      if (p < 1e-300 && cdf >= u - 1e-15) break;
    }
    return k;
  }
  // Hormann's PTRD
  const double slam = std::sqrt(mean), loglam = std::log(mean);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double invalpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    double U = uniform() - 0.5;
    double V = uniform();
    double us = 0.5 - std::abs(U);
    long k = static_cast<long>(std::floor((2.0 * a / us + b) * U + mean + 0.43));
    if (us >= 0.07 && V <= vr) return k;
    if (k < 0 || (us < 0.013 && V > us)) continue;
    if (std::log(V) + std::log(invalpha) - std::log(a / (us * us) + b) <=
        -mean + k * loglam - std::lgamma(k + 1.0))
      return k;
  }
}

long Rng::zeta(double s) {
  if (!(s > 1.0)) throw std::domain_error("zeta sampler needs s > 1");
  // Devroye, Non-Uniform Random Variate Generation, X.6
  const double am1 = s - 1.0;
  const double b = std::pow(2.0, am1);
  const double cap = static_cast<double>(std::numeric_limits<long>::max() / 2);
  for (;;) {
    double U = uniform_pos();
    double V = uniform();
    double X = std::floor(std::pow(U, -1.0 / am1));
    if (X > cap || X < 1.0) continue;
    double T = std::pow(1.0 + 1.0 / X, am1);
    if (V * X * (T - 1.0) / (b - 1.0) <= T / b) return static_cast<long>(X);
  }
}

void for_each_shard(int n_shards, const std::function<void(int)>& fn, int workers) {
  if (n_shards <= 0) return;
  if (workers <= 0) workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  workers = std::min(workers, n_shards);
  if (workers == 1) {
    for (int s = 0; s < n_shards; ++s) fn(s);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr err;
  std::atomic<bool> failed{false};
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int s = next++; s < n_shards; s = next++) {
        try {
          fn(s);
        } catch (...) {
          if (!failed.exchange(true)) err = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace bose
