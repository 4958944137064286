#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "hybrid_radiance/basis.hpp"
#include "hybrid_radiance/kernels.hpp"

namespace hr {

using SparseOperator = Eigen::SparseMatrix<std::complex<double>>;

inline constexpr std::size_t kDefaultTruncatedCap = 4096;

/// Product space of N sites, each a two-level spin times a Fock space cut at
/// n_max. Site 0 is the most significant digit of the global index; the local
/// index is spin * (n_max + 1) + n with spin 0 = down, 1 = up.
class TruncatedSpace {
 public:
  TruncatedSpace(int n_sites, int n_max, std::size_t cap = kDefaultTruncatedCap);

  int n_sites() const noexcept { return n_sites_; }
  int n_max() const noexcept { return n_max_; }
  std::size_t site_dim() const noexcept { return static_cast<std::size_t>(2 * (n_max_ + 1)); }
  std::size_t dim() const noexcept { return dim_; }

  std::size_t index(std::span<const int> spins, std::span<const int> phonons) const;
  int spin(std::size_t global, int site) const;
  int phonons(std::size_t global, int site) const;

  /// Identity on every site except `site`, where `local` acts.
  SparseOperator embed(const Eigen::MatrixXcd& local, int site) const;

  Eigen::MatrixXcd local_sigma() const;       // |down><up| x 1
  Eigen::MatrixXcd local_annihilate() const;  // 1 x a
  Eigen::MatrixXcd local_create() const;      // 1 x a^dag, n_max -> n_max+1 element dropped
  Eigen::MatrixXcd local_number() const;      // 1 x a^dag a

 private:
  std::size_t stride(int site) const;

  int n_sites_;
  int n_max_;
  std::size_t dim_;
};

/// The 4N jump operators sigma_j, sigma_j a_j, sigma_j a^dag_j,
/// sigma_j (1 + 2 a^dag_j a_j) with their 4N x 4N coefficient matrices, plus
/// the precomputed pieces of the generator.
struct JumpFamily {
  TruncatedSpace space;
  double eta0;
  std::vector<SparseOperator> jumps;
  Eigen::MatrixXd gamma_tilde;
  Eigen::MatrixXd v_tilde;

  // H_cond = -sum_{m != m'} V~_mm' J_m^dag J_m' - (i/2) sum_mm' Gamma~_mm' J_m^dag J_m'
  SparseOperator conditional_hamiltonian;
  // K_m' = sum_m Gamma~_mm' J_m, so that the recycling term is sum_m' J_m' rho K_m'^dag.
  std::vector<SparseOperator> recycled;
};

/// Block layout (1,1)=Gamma, (2,2)=(3,3)=-eta0^2 Gamma'', (1,4)=(4,1)=eta0^2 Gamma''/2,
/// identical for V~ with V and V''.
JumpFamily build_jump_family(const GeometryConfig& geom, const KernelMatrices& kernels, const TruncatedSpace& space);

struct DensityOperator {
  Eigen::MatrixXcd rho;
  double time = 0.0;
};

DensityOperator ground_state(const TruncatedSpace& space);

/// |psi> = sum_j spin_amplitudes(j) |up_j> |phonons>, normalized, as a density matrix.
DensityOperator single_excitation_state(const TruncatedSpace& space, const Eigen::VectorXcd& spin_amplitudes,
                                        std::span<const int> phonons);

/// d rho / dt of the master equation, coherent sum restricted to m != m'.
Eigen::MatrixXcd master_rhs(const DensityOperator& rho, const JumpFamily& family);

std::vector<double> site_excitations(const TruncatedSpace& space, const Eigen::MatrixXcd& rho);

struct TrajectorySample {
  double t;
  double trace;
  double excited_population;
  std::vector<double> site_populations;
  double min_eigenvalue;
  double hermiticity_defect;
  bool positivity_warning;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  DensityOperator final_state;
  int positivity_warnings = 0;
};

inline constexpr double kTraceDriftLimit = 1e-6;

/// Fixed-step RK4. Samples at t = 0 and every `sample_every` steps (and at the
/// end). Throws IntegrationError if the trace drifts by more than 1e-6.
Trajectory evolve(const DensityOperator& rho0, const JumpFamily& family, double t_final, double dt,
                  int sample_every = 1);

struct ConditionalCheck {
  double imag_deviation;  // max |Im(H_cond) - Im(H_eff)| over the hybrid sector
  double real_deviation;  // max |Re(H_cond) - s Re(H_eff)| for the better global sign s
  int real_sign;          // s
  double max_deviation;   // max of the two
};

/// Projects the no-jump generator of the master equation onto the hybrid
/// single-excitation sector and compares it entry by entry with H_eff.
/// Requires n_max >= n_phonons (n_max < 0 selects n_max = n_phonons).
ConditionalCheck conditional_generator_check(const GeometryConfig& geom, const KernelMatrices& kernels,
                                             const HybridBasis& basis, int n_max = -1,
                                             std::size_t cap = kDefaultTruncatedCap);

}  // namespace hr
