#pragma once

#include <string>
#include <vector>

namespace hr {

/// Physical parameters of a uniformly spaced chain. Rates are in units of the
/// single-atom decay rate and lengths in units of the transition wavelength.
struct GeometryConfig {
  static constexpr double gamma = 1.0;

  int n_atoms = 2;
  double spacing = 0.2;   // d / lambda0
  double phi = 1.5707963267948966;  // dipole angle to the chain axis, radians
  double eta0 = 0.0;      // Lamb-Dicke parameter
  int n_phonons = 0;

  bool operator==(const GeometryConfig&) const = default;
};

/// Lamb-Dicke values above this trigger a warning from validate().
inline constexpr double kEta0WarnThreshold = 0.5;

/// Throws DomainError on a violated invariant; returns non-fatal warnings.
std::vector<std::string> validate(const GeometryConfig& geom);

/// k0 * |z_j - z_j'| for sites j, jp.
double reduced_distance(const GeometryConfig& geom, int j, int jp);

}  // namespace hr
