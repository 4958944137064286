#include "hybrid_radiance/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hybrid_radiance/errors.hpp"
#include "hybrid_radiance/heff.hpp"
#include "hybrid_radiance/kernels.hpp"
#include "hybrid_radiance/spectra.hpp"

namespace hr {
namespace {
constexpr double kClampWindow = 1e-10;
}

ReducedSpinState reduce_spin(const Eigen::VectorXcd& psi, const HybridBasis& basis) {
  if (static_cast<std::size_t>(psi.size()) != basis.size())
    throw DomainError("state length does not match the basis dimension");
  const double norm = psi.norm();
  if (std::abs(norm - 1.0) > 1e-10) {
    std::ostringstream os;
    os << "reduce_spin expects a normalized state, got norm " << norm;
    throw DomainError(os.str());
  }
  const auto n = static_cast<Eigen::Index>(basis.n_sites());
  const auto n_cfg = static_cast<Eigen::Index>(basis.configuration_count());
  // Rows are spin sites, columns phonon configurations; rho = A A^dag.
  const Eigen::Map<const Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
      amplitudes(psi.data(), n, n_cfg);
  ReducedSpinState out;
  out.rho = amplitudes * amplitudes.adjoint();
  out.rho = 0.5 * (out.rho + out.rho.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(out.rho, Eigen::EigenvaluesOnly);
  out.populations = solver.eigenvalues();
  return out;
}

double von_neumann_entropy(const ReducedSpinState& state) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < state.populations.size(); ++i) {
    const double p = state.populations(i);
    if (p < -kClampWindow || p > 1.0 + kClampWindow) {
      std::ostringstream os;
      os << "reduced density matrix eigenvalue " << p << " outside [0, 1]";
      throw NumericalError(os.str());
    }
    const double c = std::clamp(p, 0.0, 1.0);
    if (c > 0.0) s -= c * std::log(c);
  }
  return s;
}

std::vector<EntropyScanRow> entropy_scan(const GeometryConfig& base, std::span<const int> n_atoms_list,
                                         std::size_t basis_cap) {
  std::vector<EntropyScanRow> rows;
  rows.reserve(n_atoms_list.size());
  for (int n : n_atoms_list) {
    GeometryConfig geom = base;
    geom.n_atoms = n;
    const HybridBasis basis(geom, basis_cap);
    const auto kernels = build_matrices(geom);
    const auto modes = eigendecompose(build_heff(geom, kernels, basis));
    double max_s = 0.0;
    for (const auto& mode : modes) max_s = std::max(max_s, von_neumann_entropy(reduce_spin(mode.eigenvector, basis)));
    rows.push_back({n, std::log(static_cast<double>(n)), max_s, geom.spacing});
  }
  return rows;
}

}  // namespace hr
