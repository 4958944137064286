#include "hybrid_radiance/basis.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "hybrid_radiance/errors.hpp"

namespace hr {
namespace {

constexpr std::size_t kSaturated = std::numeric_limits<std::size_t>::max();

std::size_t saturating_mul(std::size_t a, std::size_t b) {
  if (a != 0 && b > kSaturated / a) return kSaturated;
  return a * b;
}

// Compositions of `total` into `sites` parts, first site descending.
void enumerate_occupations(int sites, int total, std::vector<int>& prefix,
                           std::vector<std::vector<int>>& out) {
  if (sites == 1) {
    prefix.push_back(total);
    out.push_back(prefix);
    prefix.pop_back();
    return;
  }
  for (int first = total; first >= 0; --first) {
    prefix.push_back(first);
    enumerate_occupations(sites - 1, total - first, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

std::size_t phonon_configuration_count(int n_atoms, int n_phonons) {
  if (n_atoms < 1 || n_phonons < 0) throw DomainError("invalid (n_atoms, n_phonons)");
  // C(n_atoms + n_phonons - 1, n_phonons), multiplicative form keeps every
  // intermediate value an exact binomial.
  const std::size_t k = static_cast<std::size_t>(std::min(n_phonons, n_atoms - 1));
  const std::size_t n = static_cast<std::size_t>(n_atoms + n_phonons - 1);
  std::size_t result = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    const std::size_t num = n - k + i;
    const std::size_t g = std::gcd(result, i);
    const std::size_t reduced = result / g;
    const std::size_t rest = num / (i / g);
    if (reduced != 0 && rest > kSaturated / reduced) return kSaturated;
    result = reduced * rest;
  }
  return result;
}

std::size_t hybrid_dimension(int n_atoms, int n_phonons) {
  return saturating_mul(static_cast<std::size_t>(n_atoms), phonon_configuration_count(n_atoms, n_phonons));
}

HybridBasis::HybridBasis(const GeometryConfig& geom, std::size_t cap) : geom_(geom) {
  validate(geom_);
  const std::size_t dim = hybrid_dimension(geom_.n_atoms, geom_.n_phonons);
  if (dim > cap) {
    throw CapacityError("hybrid basis dimension for (N=" + std::to_string(geom_.n_atoms) +
                        ", n_ph=" + std::to_string(geom_.n_phonons) + ") exceeds the cap of " +
                        std::to_string(cap));
  }
  std::vector<int> prefix;
  prefix.reserve(static_cast<std::size_t>(geom_.n_atoms));
  enumerate_occupations(geom_.n_atoms, geom_.n_phonons, prefix, configs_);
  for (std::size_t i = 0; i < configs_.size(); ++i) config_index_.emplace(configs_[i], i);
}

HybridBasisState HybridBasis::state(std::size_t i) const {
  if (i >= size()) throw DomainError("basis index out of range");
  return {static_cast<int>(i / configs_.size()), configs_[i % configs_.size()]};
}

std::optional<std::size_t> HybridBasis::configuration_index(const std::vector<int>& occupation) const {
  const auto it = config_index_.find(occupation);
  if (it == config_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> HybridBasis::index_of(const HybridBasisState& s) const {
  if (s.spin_site < 0 || s.spin_site >= n_sites()) return std::nullopt;
  const auto c = configuration_index(s.occupation);
  if (!c) return std::nullopt;
  return index(s.spin_site, *c);
}

std::vector<std::pair<HybridBasisState, double>> apply_hop_and_phonon(const HybridBasisState& state, int j,
                                                                     int jp, PhononAction action) {
  const int n = static_cast<int>(state.occupation.size());
  if (j < 0 || j >= n || jp < 0 || jp >= n) throw DomainError("site index out of range");
  if (state.spin_site != jp) throw DomainError("spin excitation is not on the source site j'");

  HybridBasisState out{j, state.occupation};
  auto& occ = out.occupation;
  double amp = 1.0;
  switch (action) {
    case PhononAction::identity:
      break;
    case PhononAction::number_j:
      amp = occ[j];
      break;
    case PhononAction::number_jp:
      amp = occ[jp];
      break;
    case PhononAction::hop_jp_to_j:
    case PhononAction::hop_j_to_jp: {
      const int from = action == PhononAction::hop_jp_to_j ? jp : j;
      const int to = action == PhononAction::hop_jp_to_j ? j : jp;
      if (occ[from] == 0) return {};
      amp = std::sqrt(static_cast<double>(occ[from]));
      --occ[from];
      amp *= std::sqrt(static_cast<double>(occ[to] + 1));
      ++occ[to];
      break;
    }
  }
  if (amp == 0.0) return {};
  return {{std::move(out), amp}};
}

}  // namespace hr
