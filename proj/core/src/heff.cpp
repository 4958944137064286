#include "hybrid_radiance/heff.hpp"

#include <array>
#include <cmath>

#include "hybrid_radiance/errors.hpp"

namespace hr {

EffectiveHamiltonian build_heff(const GeometryConfig& geom, const KernelMatrices& kernels,
                                const HybridBasis& basis) {
  if (!(kernels.geom == geom) || !(basis.geometry() == geom))
    throw ConsistencyError("kernels and basis must be built from the same geometry");

  const int n = geom.n_atoms;
  const double eta2 = geom.eta0 * geom.eta0;
  const std::size_t dim = basis.size();
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));

  constexpr std::array<std::pair<PhononAction, double>, 5> kCoupling{{
      {PhononAction::identity, 1.0},
      {PhononAction::number_jp, 1.0},
      {PhononAction::number_j, 1.0},
      {PhononAction::hop_jp_to_j, -1.0},
      {PhononAction::hop_j_to_jp, -1.0},
  }};

  for (std::size_t col = 0; col < dim; ++col) {
    const HybridBasisState src = basis.state(col);
    const int jp = src.spin_site;
    for (int j = 0; j < n; ++j) {
      const auto target = basis.index(j, col % basis.configuration_count());
      h(static_cast<Eigen::Index>(target), static_cast<Eigen::Index>(col)) += kernels.m_mat(j, jp);
      if (j == jp || eta2 == 0.0) continue;
      const std::complex<double> c = eta2 * kernels.m_dd(j, jp);
      for (const auto& [action, sign] : kCoupling) {
        for (const auto& [dst, amp] : apply_hop_and_phonon(src, j, jp, action)) {
          const auto row = basis.index_of(dst);
          h(static_cast<Eigen::Index>(*row), static_cast<Eigen::Index>(col)) += sign * amp * c;
        }
      }
    }
  }
  return {geom, basis, std::move(h)};
}

TwoAtomSpectrum two_atom_spectrum(const GeometryConfig& geom, const KernelMatrices& kernels) {
  if (geom.n_atoms != 2) throw DomainError("two_atom_spectrum requires exactly two atoms");
  if (!(kernels.geom == geom)) throw ConsistencyError("kernels built from a different geometry");

  const double eta2 = geom.eta0 * geom.eta0;
  const std::complex<double> m11{0.0, -0.5 * GeometryConfig::gamma};
  const std::complex<double> m12 = kernels.m_mat(0, 1);
  const std::complex<double> m12dd = kernels.m_dd(0, 1);

  TwoAtomSpectrum out;
  for (Parity p : {Parity::symmetric, Parity::antisymmetric}) {
    const double s = p == Parity::symmetric ? 1.0 : -1.0;
    for (int na = 0; na <= geom.n_phonons; ++na) {
      const std::complex<double> e = m11 + s * (m12 + eta2 * m12dd) + s * 2.0 * eta2 * m12dd * static_cast<double>(na);
      out.levels.push_back({p, geom.n_phonons, na, e, -2.0 * e.imag()});
    }
  }
  return out;
}

Eigen::MatrixXcd separable_block(const GeometryConfig& geom, const KernelMatrices& kernels) {
  if (!(kernels.geom == geom)) throw ConsistencyError("kernels built from a different geometry");
  const double eta2 = geom.eta0 * geom.eta0;
  Eigen::MatrixXcd b = kernels.m_mat + eta2 * kernels.m_dd;
  b.diagonal() = kernels.m_mat.diagonal();
  return b;
}

Eigen::VectorXcd center_of_mass_product(const HybridBasis& basis, const Eigen::VectorXcd& spin) {
  if (spin.size() != basis.n_sites()) throw DomainError("spin vector length must equal the number of sites");
  // (sum_j a^dag_j)^n |0> = sum_occ n! / sqrt(prod occ_j!) |occ>
  const auto& configs = basis.configurations();
  Eigen::VectorXd phonon(static_cast<Eigen::Index>(configs.size()));
  for (std::size_t c = 0; c < configs.size(); ++c) {
    double log_w = 0.0;
    for (int k : configs[c]) log_w -= 0.5 * std::lgamma(static_cast<double>(k) + 1.0);
    phonon(static_cast<Eigen::Index>(c)) = std::exp(log_w);
  }
  phonon.normalize();

  Eigen::VectorXcd out(static_cast<Eigen::Index>(basis.size()));
  for (int s = 0; s < basis.n_sites(); ++s)
    for (std::size_t c = 0; c < configs.size(); ++c)
      out(static_cast<Eigen::Index>(basis.index(s, c))) = spin(s) * phonon(static_cast<Eigen::Index>(c));
  const double norm = out.norm();
  if (norm == 0.0) throw DomainError("spin vector must be non-zero");
  return out / norm;
}

}  // namespace hr
