#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "hybrid_radiance/basis.hpp"
#include "hybrid_radiance/heff.hpp"

namespace hr {

struct EigenMode {
  std::size_t index = 0;                // position after sorting
  std::complex<double> eigenvalue;
  double rate = 0.0;                    // -2 Im(eigenvalue)
  double shift = 0.0;                   // Re(eigenvalue)
  Eigen::VectorXcd eigenvector;         // unit norm, largest component real positive
  double residual = 0.0;                // ||H v - E v||
};

/// Rates below this are flagged in outputs as unphysical.
inline constexpr double kNegativeRateFlag = -1e-6;

/// Full dense eigendecomposition sorted by ascending rate (ties: shift, then
/// solver order). Throws EigenSolverError on non-convergence or when a mode
/// violates residual <= 1e-8 * max|H_ij| * dim.
std::vector<EigenMode> eigendecompose(const Eigen::MatrixXcd& h);
std::vector<EigenMode> eigendecompose(const EffectiveHamiltonian& h);

/// Short description of a matrix (dimension, norms, entry hash) for diagnostics.
std::string matrix_fingerprint(const Eigen::MatrixXcd& h);

struct SeparableMatch {
  std::size_t mode_index;
  std::complex<double> block_eigenvalue;
  double overlap;  // |<product|mode>|^2, or subspace weight for degenerate clusters
};

inline constexpr double kSeparableEigenvalueTol = 1e-8;
inline constexpr double kSeparableOverlapTol = 1e-8;

/// Pairs every eigenvalue of the separable block with a full-spectrum mode whose
/// eigenvector is (spin eigenvector) x (a~^dag_0)^n |0>. Returns exactly N
/// matches ordered by block eigenvalue rate or throws DegeneracyAmbiguityError.
std::vector<SeparableMatch> match_separable(const std::vector<EigenMode>& modes, const Eigen::MatrixXcd& block,
                                            const HybridBasis& basis);

}  // namespace hr
