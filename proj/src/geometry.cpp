#include "bose/geometry.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

namespace bose {

std::string_view to_string(Boundary bc) {
  switch (bc) {
    case Boundary::Dirichlet: return "dirichlet";
    case Boundary::Neumann: return "neumann";
    case Boundary::Periodic: return "periodic";
    case Boundary::Free: return "free";
  }
  return "unknown";
}

Boundary parse_boundary(std::string_view name) {
  std::string s(name);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "dirichlet" || s == "dir") return Boundary::Dirichlet;
  if (s == "neumann" || s == "neu") return Boundary::Neumann;
  if (s == "periodic" || s == "per") return Boundary::Periodic;
  if (s == "free") return Boundary::Free;
  if (s.rfind("robin", 0) == 0)
    throw std::invalid_argument("robin boundary functions other than 0 and +inf are not supported");
  throw std::invalid_argument("unknown boundary condition '" + std::string(name) + "'");
}

double BoxGeometry::volume() const { return std::pow(L, d); }

bool BoxGeometry::contains(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != d) return false;
  const double h = 0.5 * L;
  return std::all_of(x.begin(), x.end(), [h](double xi) { return xi >= -h && xi <= h; });
}

BoxGeometry make_geometry(int d, double L, Boundary bc) {
  if (d < 1) throw std::domain_error("dimension must be positive");
  if (!(L > 0.0) || !std::isfinite(L)) throw std::domain_error("side length must be positive and finite");
  return BoxGeometry{d, L, bc};
}

BoxGeometry geometry_for_density(int d, double rho, long N, Boundary bc) {
  if (!(rho > 0.0)) throw std::domain_error("density must be positive");
  if (N < 1) throw std::domain_error("particle number must be positive");
  return make_geometry(d, std::pow(static_cast<double>(N) / rho, 1.0 / d), bc);
}

}  // namespace bose
