#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "hybrid_radiance/basis.hpp"

namespace hr {

/// Spin density matrix left after tracing out the phonons of a pure state.
struct ReducedSpinState {
  Eigen::MatrixXcd rho;
  Eigen::VectorXd populations;  // eigenvalues of rho, ascending
};

/// rho[j, j'] = sum_occ psi(j, occ) conj(psi(j', occ)). psi must have unit norm
/// (to 1e-10); throws DomainError otherwise.
ReducedSpinState reduce_spin(const Eigen::VectorXcd& psi, const HybridBasis& basis);

/// -sum p ln p in nats. Eigenvalues within 1e-10 of [0, 1] are clamped; larger
/// violations throw NumericalError.
double von_neumann_entropy(const ReducedSpinState& state);

struct EntropyScanRow {
  int n_atoms;
  double ln_n;
  double max_entropy;
  double spacing;
};

/// For each chain length, diagonalizes the effective Hamiltonian of `base`
/// (with n_atoms replaced) and records the largest eigenmode entropy.
std::vector<EntropyScanRow> entropy_scan(const GeometryConfig& base, std::span<const int> n_atoms_list,
                                         std::size_t basis_cap = kDefaultBasisCap);

}  // namespace hr
