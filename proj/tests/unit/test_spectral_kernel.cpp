#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <sstream>
#include <vector>

#include "bose/special_functions.hpp"
#include "bose/spectral_kernel.hpp"
#include "bose/trace_table.hpp"

using namespace bose;

namespace {

// Dirichlet heat kernel on [0, 1] from its sine series.
double dirichlet_series(double t, double u, double v) {
  double s = 0.0;
  for (int n = 400; n >= 1; --n) s += 2.0 * std::sin(n * kPi * u) * std::sin(n * kPi * v) * std::exp(-0.5 * kPi * kPi * n * n * t);
  return s;
}

// Neumann kernel on [0, 1] by reflected images.
double neumann_images(double t, double u, double v) {
  double s = 0.0;
  for (int m = -60; m <= 60; ++m) {
    s += std::exp(-std::pow(u - v + 2.0 * m, 2) / (2 * t)) + std::exp(-std::pow(u + v + 2.0 * m, 2) / (2 * t));
  }
  return s / std::sqrt(2 * kPi * t);
}

// Periodic kernel on the unit circle from its Fourier series.
double periodic_series(double t, double x, double y) {
  double s = 1.0;
  for (int n = 1; n <= 400; ++n) s += 2.0 * std::cos(2 * kPi * n * (x - y)) * std::exp(-2.0 * kPi * kPi * n * n * t);
  return s;
}

}  // namespace

TEST_CASE("unit kernels match series and image oracles") {
  // unit box is [-1/2, 1/2]; the oracles use [0, 1]
  for (double t : {0.003, 0.02, 0.08, 0.15, 0.6, 3.0})
    for (double x : {-0.49, -0.2, 0.0, 0.31})
      for (double y : {-0.4, 0.05, 0.45}) {
        if (t > 0.01) {
          double dir = dirichlet_series(t, x + 0.5, y + 0.5);
          CHECK(unit_kernel_1d(Boundary::Dirichlet, t, x, y, 1e-13).value == doctest::Approx(dir).epsilon(1e-10).scale(1.0));
        }
        double neu = neumann_images(t, x + 0.5, y + 0.5);
        CHECK(unit_kernel_1d(Boundary::Neumann, t, x, y, 1e-13).value == doctest::Approx(neu).epsilon(1e-10).scale(1.0));
        if (t > 0.01) {
          double per = periodic_series(t, x, y);
          CHECK(unit_kernel_1d(Boundary::Periodic, t, x, y, 1e-13).value == doctest::Approx(per).epsilon(1e-10).scale(1.0));
        }
      }
}

TEST_CASE("reported error bounds the true error") {
  for (Boundary bc : {Boundary::Dirichlet, Boundary::Neumann, Boundary::Periodic})
    for (double t : {0.01, 0.09, 0.11, 1.0}) {
      Bounded coarse = unit_kernel_1d(bc, t, 0.1, -0.3, 1e-4);
      Bounded fine = unit_kernel_1d(bc, t, 0.1, -0.3, 1e-14);
      CHECK(std::abs(coarse.value - fine.value) <= coarse.error + 1e-14);
      CHECK(coarse.error <= 1e-4);
    }
}

TEST_CASE("d-dimensional kernel factorises") {
  BoxGeometry g{3, 2.5, Boundary::Neumann};
  std::vector<double> x{0.3, -1.0, 1.2}, y{-0.7, 0.4, 0.0};
  const double beta = 1.3, k = 2.0, t = beta * k / (g.L * g.L);
  double prod = 1.0;
  for (int i = 0; i < 3; ++i) prod *= unit_kernel_1d(g.bc, t, x[i] / g.L, y[i] / g.L, 1e-14).value / g.L;
  CHECK(eval_kernel(g, beta, k, x, y) == doctest::Approx(prod).epsilon(1e-12));
}

TEST_CASE("log traces match the eigenvalue sum") {
  for (double t : {0.002, 0.05, 0.099, 0.101, 0.7, 12.0}) {
    double per = 0.0, dir = 0.0, neu = 1.0;
    for (int n = 2000; n >= 1; --n) {
      per += 2.0 * std::exp(-2.0 * kPi * kPi * n * n * t);
      dir += std::exp(-0.5 * kPi * kPi * n * n * t);
      neu += std::exp(-0.5 * kPi * kPi * n * n * t);
    }
    per += 1.0;
    CHECK(unit_log_trace_1d(Boundary::Periodic, t, 1e-14).value == doctest::Approx(std::log(per)).epsilon(1e-12));
    CHECK(unit_log_trace_1d(Boundary::Dirichlet, t, 1e-14).value == doctest::Approx(std::log(dir)).epsilon(1e-12));
    CHECK(unit_log_trace_1d(Boundary::Neumann, t, 1e-14).value == doctest::Approx(std::log(neu)).epsilon(1e-12));
  }
}

TEST_CASE("trace table stays finite for deep Dirichlet decay") {
  TraceTable t = build_trace_table({3, 1.0, Boundary::Dirichlet}, 1.0, 5000);
  // log t_k ~ -3 pi^2 k / 2 for large k
  CHECK(t.log_t[4999] == doctest::Approx(-1.5 * kPi * kPi * 5000).epsilon(1e-12));
  CHECK(t.trace(5000) == 0.0);
}

TEST_CASE("free kernel") {
  BoxGeometry g{2, 3.0, Boundary::Free};
  std::vector<double> x{0.0, 0.0}, y{1.0, 0.5};
  double want = std::exp(-1.25 / (2 * 0.5)) / (2 * kPi * 0.5);
  CHECK(eval_kernel(g, 0.5, 1.0, x, y) == doctest::Approx(want).epsilon(1e-14));
  CHECK_THROWS_AS(SpectralBasis(Boundary::Free, 3), std::domain_error);
}

TEST_CASE("spectral basis multiplicities") {
  SpectralBasis p(Boundary::Periodic, 1);
  auto modes = p.modes(3);
  int count = 0;
  for (const auto& m : modes) count += m.level <= 2;
  CHECK(count == 5);  // 1 + 2 + 2
  SpectralBasis d(Boundary::Dirichlet, 1);
  std::vector<double> centre{0.0}, edge{0.5};
  CHECK(d.phi1(centre) == doctest::Approx(std::sqrt(2.0)));
  CHECK(d.phi1(edge) == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("trace table io rejects garbage") {
  std::istringstream bad("# not a table\n1 2 3\n");
  CHECK_THROWS(read_trace_table(bad));
}
