#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "hybrid_radiance/geometry.hpp"

namespace hr {

/// One spin excitation on `spin_site` with the given phonon occupation per site.
struct HybridBasisState {
  int spin_site = 0;
  std::vector<int> occupation;

  bool operator==(const HybridBasisState&) const = default;
};

enum class PhononAction {
  identity,
  number_j,         // a^dag_j a_j
  number_jp,        // a^dag_j' a_j'
  hop_jp_to_j,      // a^dag_j a_j'
  hop_j_to_jp,      // a^dag_j' a_j
};

inline constexpr std::size_t kDefaultBasisCap = 200000;

/// N * C(N + n_ph - 1, n_ph); saturates at SIZE_MAX instead of overflowing.
std::size_t hybrid_dimension(int n_atoms, int n_phonons);
std::size_t phonon_configuration_count(int n_atoms, int n_phonons);

/// Single-spin-excitation states tensored with fixed-total-phonon-number Fock
/// configurations. States are ordered by spin site, then by occupation vector
/// in descending lexicographic order, so (1,0) precedes (0,1).
class HybridBasis {
 public:
  explicit HybridBasis(const GeometryConfig& geom, std::size_t cap = kDefaultBasisCap);

  const GeometryConfig& geometry() const noexcept { return geom_; }
  int n_sites() const noexcept { return geom_.n_atoms; }
  int n_phonons() const noexcept { return geom_.n_phonons; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(n_sites()) * configs_.size(); }

  HybridBasisState state(std::size_t i) const;
  std::optional<std::size_t> index_of(const HybridBasisState& s) const;

  /// Phonon configurations in basis order; state i has configuration i % count.
  const std::vector<std::vector<int>>& configurations() const noexcept { return configs_; }
  std::size_t configuration_count() const noexcept { return configs_.size(); }
  std::optional<std::size_t> configuration_index(const std::vector<int>& occupation) const;
  std::size_t index(int spin_site, std::size_t config_index) const noexcept {
    return static_cast<std::size_t>(spin_site) * configs_.size() + config_index;
  }

 private:
  GeometryConfig geom_;
  std::vector<std::vector<int>> configs_;
  std::map<std::vector<int>, std::size_t> config_index_;
};

/// Applies b^dag_j b_j' followed by `action` on the phonons of `state`
/// (which must have its excitation on j'). Returns resulting states with
/// bosonic amplitudes; empty when an annihilator hits an empty mode.
std::vector<std::pair<HybridBasisState, double>> apply_hop_and_phonon(const HybridBasisState& state, int j,
                                                                     int jp, PhononAction action);

}  // namespace hr
