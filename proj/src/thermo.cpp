#include "bose/thermo.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "bose/special_functions.hpp"

namespace bose {
namespace {

double prefactor(double beta, int d) { return std::pow(2.0 * kPi * beta, -0.5 * d); }

void check(double beta, int d) {
  if (!(beta > 0.0)) throw std::domain_error("beta must be positive");
  if (d < 1) throw std::domain_error("dimension must be positive");
}

}  // namespace

double critical_density(int d, double beta) {
  check(beta, d);
  if (d <= 2) return std::numeric_limits<double>::infinity();
  return prefactor(beta, d) * zeta(0.5 * d);
}

double density(double mu, double beta, int d) {
  check(beta, d);
  if (mu > 0.0) throw std::domain_error("chemical potential must be <= 0");
  return prefactor(beta, d) * exp_weighted_power_sum(-beta * mu, 0.5 * d);
}

double pressure(double mu, double beta, int d) {
  check(beta, d);
  if (mu > 0.0) throw std::domain_error("chemical potential must be <= 0");
  return prefactor(beta, d) * exp_weighted_power_sum(-beta * mu, 0.5 * d + 1.0);
}

double chemical_potential(double rho, double beta, int d) {
  check(beta, d);
  if (!(rho > 0.0)) throw std::domain_error("density must be positive");
  if (rho >= critical_density(d, beta)) return 0.0;
  double lo = -1e6, hi = 0.0;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (density(mid, beta, d) < rho)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double free_energy(double rho, double beta, int d) {
  double mu = chemical_potential(rho, beta, d);
  return mu * rho - pressure(mu, beta, d) / beta;
}

double finite_volume_free_energy(const PartitionTable& table, long N) {
  if (N < 1 || N > table.n_max()) throw std::out_of_range("N outside partition table");
  return -table.log_Z[N] / (table.beta * std::pow(table.geometry.L, table.geometry.d));
}

ThermoCurve build_thermo_curve(double beta, int d, const std::vector<double>& mu_grid) {
  ThermoCurve c;
  c.beta = beta;
  c.d = d;
  c.rho_c = critical_density(d, beta);
  for (double mu : mu_grid) {
    if (!(mu < 0.0)) throw std::domain_error("thermo curve grid must be strictly negative");
    c.mu.push_back(mu);
    c.pressure.push_back(pressure(mu, beta, d));
    c.density.push_back(density(mu, beta, d));
  }
  return c;
}

}  // namespace bose
