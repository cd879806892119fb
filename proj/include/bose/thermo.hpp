#pragma once

#include <vector>

#include "bose/partition.hpp"

namespace bose {

/// (2 pi beta)^{-d/2} zeta(d/2); +infinity for d <= 2.
double critical_density(int d, double beta);

/// rho(mu) = sum_k e^{beta mu k} (2 pi beta k)^{-d/2}, mu <= 0.
double density(double mu, double beta, int d);

/// p(mu) = sum_k e^{beta mu k} k^{-1} (2 pi beta k)^{-d/2}, so that rho = beta^{-1} dp/dmu.
double pressure(double mu, double beta, int d);

/// Solves density(mu) = rho by bisection on [-1e6, 0]; 0 when rho >= rho_c.
double chemical_potential(double rho, double beta, int d);

/// f(rho) = mu rho - p(mu) / beta with mu = mu(rho); constant above rho_c.
double free_energy(double rho, double beta, int d);

/// -(1/beta) |Lambda|^{-1} log Z_N for the box behind the table.
double finite_volume_free_energy(const PartitionTable& table, long N);

struct ThermoCurve {
  double beta = 1.0;
  int d = 3;
  double rho_c = 0.0;
  std::vector<double> mu;
  std::vector<double> pressure;
  std::vector<double> density;
};

/// Tabulates p and rho on the given mu values (all must be < 0).
ThermoCurve build_thermo_curve(double beta, int d, const std::vector<double>& mu_grid);

}  // namespace bose
