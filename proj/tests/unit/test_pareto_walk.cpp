#include <doctest.h>

#include <boost/math/special_functions/zeta.hpp>
#include <cmath>
#include <stdexcept>
#include <numeric>

#include "bose/pareto_walk.hpp"

using namespace bose;

TEST_CASE("step pmf") {
  ParetoWalkModel m(3);
  CHECK(m.pmf(1) == doctest::Approx(1.0 / boost::math::zeta(2.5)).epsilon(1e-14));
  CHECK(m.pmf(0) == 0.0);
  ParetoWalkModel m5(5);
  CHECK(m5.s == 3.5);
  CHECK(m5.a == doctest::Approx(boost::math::zeta(2.5) / boost::math::zeta(3.5)).epsilon(1e-12));
}

TEST_CASE("sum law mass and mean") {
  ParetoWalkModel m(3);
  const long n = 50, M = 200000;
  auto p = pareto_sum_pmf(m, n, M);
  double mass = std::accumulate(p.begin(), p.end(), 0.0);
  // mass lost is P(S_n > M) <= n P(Z > M - n + 1)
  CHECK(mass <= 1.0 + 1e-10);
  CHECK(mass >= 1.0 - n * m.tail_mass(M - n) - 1e-10);
  for (long j = 0; j < n; ++j) CHECK(p[j] == 0.0);
  CHECK(p[n] == doctest::Approx(std::pow(m.pmf(1), n)).epsilon(1e-8));
}

TEST_CASE("n = 3 against triple enumeration") {
  ParetoWalkModel m(3);
  auto p = pareto_sum_pmf(m, 3, 120);
  for (long s : {3L, 4L, 10L, 57L, 120L}) {
    double e = 0.0;
    for (long i = 1; i < s; ++i)
      for (long j = 1; i + j < s; ++j) e += m.pmf(i) * m.pmf(j) * m.pmf(s - i - j);
    CHECK(p[s] == doctest::Approx(e).epsilon(1e-9));
  }
}

TEST_CASE("report window") {
  ParetoWalkModel m(3);
  ParetoLcltReport r = pareto_lclt_check(m, 1000, {10, 800, 2000, 5000});
  CHECK(r.window_lo == static_cast<long>(std::ceil(100.0 * std::log(1000.0))));
  CHECK(r.window_hi == 4000);
  REQUIRE(r.rows.size() == 4);
  CHECK_FALSE(r.rows[0].in_window);
  CHECK(r.rows[1].in_window);
  CHECK_FALSE(r.rows[3].in_window);
  CHECK(r.rows[1].m == static_cast<long>(std::floor(m.a * 1000)) + 800);
}
