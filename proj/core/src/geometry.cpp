#include "hybrid_radiance/geometry.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>

#include "hybrid_radiance/errors.hpp"

namespace hr {

std::vector<std::string> validate(const GeometryConfig& geom) {
  if (geom.n_atoms < 1) throw DomainError("n_atoms must be positive");
  if (!(geom.spacing > 0.0) || !std::isfinite(geom.spacing))
    throw DomainError("spacing must be a finite positive number");
  if (!(geom.phi >= 0.0 && geom.phi <= std::numbers::pi))
    throw DomainError("phi must lie in [0, pi]");
  if (!(geom.eta0 >= 0.0) || !std::isfinite(geom.eta0))
    throw DomainError("eta0 must be a finite non-negative number");
  if (geom.n_phonons < 0) throw DomainError("n_phonons must be non-negative");

  std::vector<std::string> warnings;
  if (geom.eta0 > kEta0WarnThreshold)
    warnings.emplace_back("eta0 = " + std::to_string(geom.eta0) +
                          " is outside the small Lamb-Dicke regime the second-order expansion assumes");
  return warnings;
}

double reduced_distance(const GeometryConfig& geom, int j, int jp) {
  return 2.0 * std::numbers::pi * geom.spacing * std::abs(j - jp);
}

}  // namespace hr
