#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "hybrid_radiance/basis.hpp"
#include "hybrid_radiance/kernels.hpp"

namespace hr {

/// Non-Hermitian single-excitation Hamiltonian on a fixed-phonon-number sector.
/// Complex symmetric: H == H^T.
struct EffectiveHamiltonian {
  GeometryConfig geom;
  HybridBasis basis;
  Eigen::MatrixXcd matrix;
};

/// H = sum_jj' b^dag_j b_j' [M_jj' + eta0^2 M''_jj' (1 - delta_jj' + n_j' + n_j
///                                               - a^dag_j a_j' - a^dag_j' a_j)]
/// Throws ConsistencyError when kernels or basis come from a different geometry.
EffectiveHamiltonian build_heff(const GeometryConfig& geom, const KernelMatrices& kernels,
                                const HybridBasis& basis);

enum class Parity { symmetric, antisymmetric };

struct TwoAtomLevel {
  Parity parity;
  int n_phonons;
  int n_antisymmetric;  // phonons in the relative-motion mode
  std::complex<double> energy;
  double rate;  // -2 Im(energy) = gamma +- Gamma_12 +- eta0^2 (2 n_a + 1) Gamma''_12
};

struct TwoAtomSpectrum {
  std::vector<TwoAtomLevel> levels;
};

/// Closed-form two-atom spectrum; requires geom.n_atoms == 2.
TwoAtomSpectrum two_atom_spectrum(const GeometryConfig& geom, const KernelMatrices& kernels);

/// Spin block acting on center-of-mass phonon states:
/// B_jj' = M_jj' + eta0^2 M''_jj' (1 - delta_jj').
Eigen::MatrixXcd separable_block(const GeometryConfig& geom, const KernelMatrices& kernels);

/// (spin) tensor (a~^dag_0)^n |0>, normalized, with a~_0 the uniform phonon mode.
Eigen::VectorXcd center_of_mass_product(const HybridBasis& basis, const Eigen::VectorXcd& spin);

}  // namespace hr
