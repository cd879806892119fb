#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "bose/rdm.hpp"
#include "bose/thermo.hpp"
#include "bose/trace_table.hpp"

using namespace bose;

namespace {

RdmKernel make_kernel(Boundary bc, double rho, long N, double beta = 1.0) {
  BoxGeometry g = geometry_for_density(3, rho, N, bc);
  return RdmKernel(build_partition_table(build_trace_table(g, beta, N), N), N);
}

}  // namespace

TEST_CASE("diagonal sums directly over r") {
  RdmKernel k = make_kernel(Boundary::Neumann, 0.2, 30);
  const auto& g = k.geometry();
  std::vector<double> x{0.3, -0.8, 1.1}, y{-0.2, 0.5, 0.9};
  double direct = 0.0;
  for (long r = 1; r <= 30; ++r) direct += k.weights()[r - 1] * eval_kernel(g, 1.0, static_cast<double>(r), x, y, 1e-15);
  CHECK(eval_rdm(k, x, y) == doctest::Approx(direct).epsilon(1e-11));
  Bounded b = eval_rdm_bounded(k, x, y);
  CHECK(std::abs(b.value - direct) <= b.error + 1e-12 * direct);
}

TEST_CASE("algebraic trace equals N") {
  for (Boundary bc : {Boundary::Dirichlet, Boundary::Periodic, Boundary::Free}) {
    RdmKernel k = make_kernel(bc, 0.3, 500);
    CHECK(rdm_trace_algebraic(k) == doctest::Approx(500.0).epsilon(1e-10));
  }
}

TEST_CASE("periodic eigenvalue is the weight sum") {
  // constants are eigenfunctions and each g_r integrates to 1
  RdmKernel k = make_kernel(Boundary::Periodic, 0.3, 400);
  double s = 0.0;
  for (double w : k.weights()) s += w;
  CHECK(continuum_principal_eigenvalue(k) == doctest::Approx(s).epsilon(1e-12));
  // midpoint aliasing shrinks with the grid
  double e8 = std::abs(principal_eigenvalue(k, 8).sigma - s), e16 = std::abs(principal_eigenvalue(k, 16).sigma - s);
  CHECK(e8 < 1e-5 * s);
  CHECK(e16 < e8);
}

TEST_CASE("Dirichlet continuum eigenvalue") {
  RdmKernel k = make_kernel(Boundary::Dirichlet, 0.3, 200);
  const double L = k.geometry().L, l1 = 1.5 * M_PI * M_PI;
  double want = 0.0;
  for (long r = 1; r <= 200; ++r) want += k.weights()[r - 1] * std::exp(-l1 * r / (L * L));
  CHECK(continuum_principal_eigenvalue(k) == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("profile decays away from the source") {
  RdmKernel k = make_kernel(Boundary::Periodic, 0.05, 200);
  auto p = rdm_profile(k, 32);
  REQUIRE(p.size() == 32);
  CHECK(p.back().r == doctest::Approx(k.geometry().L / 2));
  for (std::size_t i = 1; i < p.size(); ++i) CHECK(p[i].gamma <= p[i - 1].gamma * (1 + 1e-12));
}

TEST_CASE("profile fits recover synthetic data") {
  std::vector<ProfilePoint> pts;
  for (int i = 1; i <= 50; ++i) {
    double r = 0.2 * i;
    pts.push_back({r, 0.7 + 2.0 / r});
  }
  PowerFit pf = fit_power_profile(pts, 3, 1.0, 10.0);
  CHECK(pf.c0 == doctest::Approx(0.7).epsilon(1e-10));
  CHECK(pf.A == doctest::Approx(2.0).epsilon(1e-10));
  std::vector<ProfilePoint> ex;
  for (int i = 1; i <= 50; ++i) ex.push_back({0.2 * i, 3.0 * std::exp(-0.4 * 0.2 * i)});
  ExpFit ef = fit_exponential_profile(ex, 0.5, 9.0);
  CHECK(ef.rate == doctest::Approx(0.4).epsilon(1e-10));
  CHECK(ef.r2 == doctest::Approx(1.0));
}

TEST_CASE("sweep rejects low dimension") {
  CHECK_THROWS_AS(odlro_sweep(Boundary::Periodic, 2, 1.0, 0.3, {64, 128}), std::domain_error);
}
