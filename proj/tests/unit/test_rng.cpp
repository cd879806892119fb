#include <doctest.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/special_functions/zeta.hpp>
#include <cmath>
#include <stdexcept>
#include <map>
#include <vector>

#include "bose/rng.hpp"

using namespace bose;

namespace {

// Chi-square upper-tail p-value of observed counts against probabilities.
double chi_square_p(const std::vector<long>& obs, const std::vector<double>& prob, long n) {
  double stat = 0.0;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    double e = prob[i] * n;
    stat += (obs[i] - e) * (obs[i] - e) / e;
  }
  boost::math::chi_squared dist(static_cast<double>(obs.size() - 1));
  return boost::math::cdf(boost::math::complement(dist, stat));
}

}  // namespace

TEST_CASE("Philox known-answer vector") {
  // Random123 reference: key (0, 0), counter 0 -> 6627e8d5 e169c58d bc57ac4c 9b00dbd8
  Rng r(0, 0);
  CHECK(r.next_u32() == 0x6627e8d5u);
  CHECK(r.next_u32() == 0xe169c58du);
  CHECK(r.next_u32() == 0xbc57ac4cu);
  CHECK(r.next_u32() == 0x9b00dbd8u);
}

TEST_CASE("streams are reproducible and distinct") {
  Rng a(42, 3), b(42, 3), c(42, 4);
  bool differ = false;
  for (int i = 0; i < 100; ++i) {
    auto x = a.next_u64();
    CHECK(x == b.next_u64());
    differ = differ || x != c.next_u64();
  }
  CHECK(differ);
}

TEST_CASE("uniform moments") {
  Rng r(1);
  const long n = 1000000;
  double s = 0.0, s2 = 0.0;
  for (long i = 0; i < n; ++i) {
    double u = r.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    s += u;
    s2 += u * u;
  }
  CHECK(std::abs(s / n - 0.5) < 5 * std::sqrt(1.0 / 12 / n));
  CHECK(std::abs(s2 / n - 1.0 / 3) < 5 * std::sqrt(4.0 / 45 / n));
}

TEST_CASE("Poisson law, both branches") {
  for (double mean : {0.3, 4.0, 9.9, 10.5, 37.0, 400.0}) {
    Rng r(7, static_cast<std::uint64_t>(mean * 10));
    const long n = 200000;
    std::map<long, long> freq;
    for (long i = 0; i < n; ++i) ++freq[r.poisson(mean)];
    // bins with expected count >= 20, lumped tails
    std::vector<double> prob;
    std::vector<long> obs;
    double pk = std::exp(-mean), below = 0.0;
    long lo = -1;
    double acc = 0.0;
    long acc_obs = 0;
    for (long k = 0; k < static_cast<long>(mean * 3 + 50); ++k) {
      if (k > 0) pk *= mean / k;
      acc += pk;
      acc_obs += freq.count(k) ? freq[k] : 0;
      if (acc * n >= 20) {
        prob.push_back(acc);
        obs.push_back(acc_obs);
        acc = 0.0;
        acc_obs = 0;
        if (lo < 0) lo = k;
      }
      below += pk;
    }
    long rest = n;
    for (long o : obs) rest -= o;
    double rest_p = 1.0;
    for (double p : prob) rest_p -= p;
    if (rest_p * n > 1.0) {
      prob.push_back(rest_p);
      obs.push_back(rest);
    } else {
      obs.back() += rest;
      prob.back() += rest_p;
    }
    CHECK_MESSAGE(chi_square_p(obs, prob, n) > 1e-4, "mean " << mean);
  }
}

TEST_CASE("zeta law") {
  const double s = 2.5, z = boost::math::zeta(s);
  Rng r(99);
  const long n = 400000;
  const int K = 30;
  std::vector<long> obs(K + 1, 0);
  for (long i = 0; i < n; ++i) {
    long j = r.zeta(s);
    REQUIRE(j >= 1);
    ++obs[std::min<long>(j, K + 1) - 1];
  }
  std::vector<double> prob(K + 1);
  double head = 0.0;
  for (int j = 1; j <= K; ++j) head += prob[j - 1] = std::pow(j, -s) / z;
  prob[K] = 1.0 - head;
  CHECK(chi_square_p(obs, prob, n) > 1e-4);
}

TEST_CASE("shards run once each") {
  std::vector<int> hits(37, 0);
  for_each_shard(37, [&](int s) { hits[s] += 1; }, 4);
  for (int h : hits) CHECK(h == 1);
}
