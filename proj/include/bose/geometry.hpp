#pragma once

#include <span>
#include <string>
#include <string_view>

namespace bose {

/// Boundary condition of the box. Free has no spectral basis; its kernel is
/// the plain Gaussian transition density restricted to the box.
enum class Boundary { Dirichlet, Neumann, Periodic, Free };

std::string_view to_string(Boundary bc);

/// Accepts dirichlet/dir, neumann/neu, periodic/per, free. Robin-type names
/// and anything else throw std::invalid_argument.
Boundary parse_boundary(std::string_view name);

/// Centred cube L*[-1/2, 1/2]^d with a boundary condition.
struct BoxGeometry {
  int d = 3;
  double L = 1.0;
  Boundary bc = Boundary::Periodic;

  double volume() const;
  bool contains(std::span<const double> x) const;
  bool has_spectral_basis() const { return bc != Boundary::Free; }
};

/// Validates d >= 1 and L > 0.
BoxGeometry make_geometry(int d, double L, Boundary bc);

/// Box of volume N / rho, the thermodynamic-limit family.
BoxGeometry geometry_for_density(int d, double rho, long N, Boundary bc);

}  // namespace bose
