#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "bose/dickman.hpp"
#include "bose/special_functions.hpp"

using namespace bose;

namespace {

// p(x) = p(2) - int_2^x p(u - 1) / u du with the [1, 2] closed form, by Simpson.
double p_on_2_3(double x) {
  const double emg = std::exp(-kEulerGamma);
  const int n = 20000;
  const double h = (x - 2.0) / n;
  auto f = [&](double u) { return emg * (1.0 - std::log(u - 1.0)) / u; };
  double s = f(2.0) + f(x);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(2.0 + i * h);
  return emg * (1.0 - std::log(2.0)) - s * h / 3.0;
}

}  // namespace

TEST_CASE("values on [2, 3] from the delay equation") {
  for (double x : {2.1, 2.5, 2.9, 3.0}) CHECK(dickman_p(x) == doctest::Approx(p_on_2_3(x)).epsilon(1e-9));
}

TEST_CASE("p(x) is rho(x) e^{-gamma} with Dickman's rho") {
  // rho(3) = 0.0486083883, rho(4) = 0.0049109256, rho(5) = 0.0003547247
  const double emg = std::exp(-kEulerGamma);
  CHECK(dickman_p(3.0) / emg == doctest::Approx(0.04860838).epsilon(1e-6));
  CHECK(dickman_p(4.0) / emg == doctest::Approx(0.00491092).epsilon(1e-5));
  CHECK(dickman_p(5.0) / emg == doctest::Approx(0.000354724700).epsilon(1e-5));
}

TEST_CASE("tail vanishes and domain checked") {
  CHECK(dickman_p(30.0) == 0.0);
  CHECK_THROWS_AS(dickman_p(-0.1), std::domain_error);
  CHECK_THROWS_AS(DickmanDensity(0.3, 10.0), std::domain_error);
  CHECK_THROWS_AS(DickmanDensity(1e-3, 1.5), std::domain_error);
}

TEST_CASE("Laplace transform closed form") {
  for (double s : {0.2, 1.0, 5.0})
    CHECK(DickmanDensity::instance().laplace_transform(s) == doctest::Approx(dickman_laplace_closed_form(s)).epsilon(1e-9));
  CHECK(dickman_laplace_closed_form(0.0) == 1.0);
}

TEST_CASE("step refinement converges") {
  DickmanDensity coarse(1e-2, 8.0);
  for (double x : {2.5, 4.2, 6.7}) CHECK(coarse(x) == doctest::Approx(dickman_p(x)).epsilon(1e-5));
}
