#include <doctest.h>

#include <boost/math/special_functions/zeta.hpp>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "bose/geometry.hpp"
#include "bose/special_functions.hpp"

using namespace bose;

namespace {

double direct_sum(double a, double s) {
  double sum = 0.0;
  for (long k = 4000000; k >= 1; --k) sum += std::exp(-a * k) * std::pow(static_cast<double>(k), -s);
  return sum;
}

}  // namespace

TEST_CASE("zeta agrees with boost") {
  for (double s : {1.5, 2.0, 2.5, 3.0, 4.5, 7.0}) CHECK(zeta(s) == doctest::Approx(boost::math::zeta(s)).epsilon(1e-13));
  CHECK_THROWS_AS(zeta(1.0), std::domain_error);
}

TEST_CASE("exp-weighted power sums against direct summation") {
  for (double a : {1e-3, 0.05, 0.3, 0.6, 2.0, 40.0})
    for (double s : {1.5, 2.5}) {
      double want = direct_sum(a, s);
      CHECK(exp_weighted_power_sum(a, s) == doctest::Approx(want).epsilon(1e-12));
    }
  CHECK(std::isinf(exp_weighted_power_sum(0.0, 1.0)));
  CHECK(exp_weighted_power_sum(800.0, 2.5) == doctest::Approx(std::exp(-800.0)).epsilon(1e-12));
  CHECK_THROWS_AS(exp_weighted_power_sum(-1.0, 2.0), std::domain_error);
}

TEST_CASE("log-sum-exp is stable") {
  std::vector<double> v{1000.0, 1000.0};
  CHECK(log_sum_exp(v) == doctest::Approx(1000.0 + std::log(2.0)));
  std::vector<double> w{-1e300, -INFINITY};
  CHECK(log_sum_exp(w) == -1e300);
  CHECK(log_add_exp(-INFINITY, 3.0) == 3.0);
  CHECK(log_add_exp(0.0, 0.0) == doctest::Approx(std::log(2.0)));
}

TEST_CASE("geometry") {
  BoxGeometry g = make_geometry(3, 2.0, Boundary::Dirichlet);
  CHECK(g.volume() == 8.0);
  std::vector<double> in{0.9, -1.0, 0.0}, out{1.01, 0.0, 0.0};
  CHECK(g.contains(in));
  CHECK_FALSE(g.contains(out));
  CHECK(parse_boundary("dir") == Boundary::Dirichlet);
  CHECK(parse_boundary("periodic") == Boundary::Periodic);
  CHECK_THROWS_AS(parse_boundary("robin"), std::invalid_argument);
  CHECK_THROWS(make_geometry(0, 1.0, Boundary::Free));
  CHECK_THROWS(make_geometry(3, -1.0, Boundary::Free));
  BoxGeometry h = geometry_for_density(3, 0.5, 500, Boundary::Neumann);
  CHECK(h.volume() == doctest::Approx(1000.0));
}
