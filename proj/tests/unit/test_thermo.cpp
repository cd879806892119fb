#include <doctest.h>

#include <boost/math/special_functions/zeta.hpp>
#include <cmath>
#include <stdexcept>

#include "bose/partition.hpp"
#include "bose/special_functions.hpp"
#include "bose/thermo.hpp"
#include "bose/trace_table.hpp"

using namespace bose;

TEST_CASE("critical density scales as beta^{-d/2}") {
  const double z = boost::math::zeta(1.5);
  for (double beta : {0.25, 1.0, 3.0}) CHECK(critical_density(3, beta) == doctest::Approx(z * std::pow(2 * kPi * beta, -1.5)).epsilon(1e-12));
  CHECK(critical_density(4, 1.0) == doctest::Approx(boost::math::zeta(2.0) / (4 * kPi * kPi)).epsilon(1e-12));
  CHECK(std::isinf(critical_density(1, 1.0)));
}

TEST_CASE("classical limit") {
  // mu -> -infinity: rho ~ e^{beta mu} (2 pi beta)^{-d/2}, p ~ rho
  double mu = -30.0, beta = 1.0;
  double rho = density(mu, beta, 3);
  CHECK(rho == doctest::Approx(std::exp(mu) * std::pow(2 * kPi, -1.5)).epsilon(1e-12));
  CHECK(pressure(mu, beta, 3) == doctest::Approx(rho).epsilon(1e-12));
}

TEST_CASE("pressure at mu = 0") {
  CHECK(pressure(0.0, 1.0, 3) == doctest::Approx(std::pow(2 * kPi, -1.5) * boost::math::zeta(2.5)).epsilon(1e-12));
}

TEST_CASE("free energy is a Legendre transform") {
  // f(rho) = sup_mu (mu rho - p/beta) is convex; check the derivative df/drho = mu
  const double beta = 1.0, h = 1e-6;
  for (double rho : {0.01, 0.05, 0.1, 0.15}) {
    double d = (free_energy(rho + h, beta, 3) - free_energy(rho - h, beta, 3)) / (2 * h);
    CHECK(d == doctest::Approx(chemical_potential(rho, beta, 3)).epsilon(1e-5).scale(1.0));
  }
}

TEST_CASE("finite-volume free energy approaches the limit") {
  const double rho = 0.1;
  double prev = INFINITY;
  for (long N : {64L, 256L, 1024L}) {
    BoxGeometry g = geometry_for_density(3, rho, N, Boundary::Periodic);
    PartitionTable p = build_partition_table(build_trace_table(g, 1.0, N), N);
    double gap = std::abs(finite_volume_free_energy(p, N) - free_energy(rho, 1.0, 3));
    CHECK(gap < prev);
    prev = gap;
  }
  CHECK(prev < 2e-3);
}

TEST_CASE("thermo curve") {
  ThermoCurve c = build_thermo_curve(1.0, 3, {-1.0, -0.1, -0.01});
  REQUIRE(c.density.size() == 3);
  CHECK(c.density[0] < c.density[1]);
  CHECK(c.density[2] < critical_density(3, 1.0));
  CHECK_THROWS(density(0.5, 1.0, 3));
}
