#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <numeric>

#include "bose/dickman.hpp"
#include "bose/poisson_dirichlet.hpp"
#include "bose/special_functions.hpp"
#include "bose/thermo.hpp"

using namespace bose;

TEST_CASE("largest atom CDF against Monte Carlo") {
  Rng rng(12);
  const long n = 200000;
  const double xs[] = {0.3, 0.5, 0.7, 0.9};
  long below[4] = {0, 0, 0, 0};
  for (long i = 0; i < n; ++i) {
    double v1 = sample_pd1(rng, 1e-9).atoms.front();
    for (int j = 0; j < 4; ++j) below[j] += v1 <= xs[j];
  }
  const Pd1LargestCdf& F = Pd1LargestCdf::instance();
  for (int j = 0; j < 4; ++j) {
    double p = F(xs[j]);
    CHECK(std::abs(static_cast<double>(below[j]) / n - p) < 5 * std::sqrt(p * (1 - p) / n));
  }
  // F(x) = 1 + log x on [1/2, 1]
  CHECK(F(0.75) == doctest::Approx(1.0 + std::log(0.75)).epsilon(1e-12));
}

TEST_CASE("second-largest atom mean") {
  // E[V_2] = 0.2095808742 (second-longest cycle of a random permutation)
  Rng rng(9);
  const long n = 200000;
  double s = 0.0, s2 = 0.0;
  for (long i = 0; i < n; ++i) {
    auto a = sample_pd1(rng, 1e-9).atoms;
    double v2 = a.size() > 1 ? a[1] : 0.0;
    s += v2;
    s2 += v2 * v2;
  }
  double emp = s / n, sd = std::sqrt((s2 / n - emp * emp) / n);
  CHECK(std::abs(emp - 0.2095808742) < 5 * sd);
}

TEST_CASE("marginal density domain") {
  std::vector<double> out{1.2};
  CHECK_THROWS_AS(pd_marginal_density(out), std::domain_error);
  std::vector<double> sum{0.7, 0.4};
  CHECK_THROWS_AS(pd_marginal_density(sum), std::domain_error);
}

TEST_CASE("Golomb-Dickman constant") { CHECK(golomb_dickman() == doctest::Approx(0.62432998854355).epsilon(1e-9)); }

TEST_CASE("convergence report shape") {
  PdReport r = pd_convergence_test(Boundary::Periodic, 3, 1.0, 2 * critical_density(3, 1.0), {128, 256}, 400, 3, 100, 4);
  REQUIRE(r.rows.size() == 2);
  CHECK(r.rows[0].ks > 0.0);
  CHECK(r.ks_confidence >= 0.0);
  CHECK(r.ks_confidence <= 1.0);
  CHECK(r.rows[1].mean_l1_fraction > 0.0);
}
