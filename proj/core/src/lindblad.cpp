#include "hybrid_radiance/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hybrid_radiance/errors.hpp"
#include "hybrid_radiance/heff.hpp"

namespace hr {
namespace {

using cd = std::complex<double>;
using Triplet = Eigen::Triplet<cd>;

std::size_t checked_power(std::size_t base, int exponent, std::size_t cap) {
  std::size_t result = 1;
  for (int i = 0; i < exponent; ++i) {
    if (result > cap / base) return cap + 1;
    result *= base;
  }
  return result;
}

SparseOperator combine(const std::vector<SparseOperator>& ops, const Eigen::MatrixXd& coeffs, Eigen::Index column,
                       Eigen::Index dim) {
  SparseOperator sum(dim, dim);
  for (Eigen::Index m = 0; m < coeffs.rows(); ++m) {
    const double c = coeffs(m, column);
    if (c != 0.0) sum += c * ops[static_cast<std::size_t>(m)];
  }
  sum.prune(cd{0.0, 0.0});
  return sum;
}

double min_hermitian_eigenvalue(const Eigen::MatrixXcd& rho) {
  const Eigen::MatrixXcd herm = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(herm, Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0);
}

}  // namespace

TruncatedSpace::TruncatedSpace(int n_sites, int n_max, std::size_t cap) : n_sites_(n_sites), n_max_(n_max) {
  if (n_sites < 1) throw DomainError("truncated space needs at least one site");
  if (n_max < 0) throw DomainError("Fock cutoff must be non-negative");
  dim_ = checked_power(site_dim(), n_sites, cap);
  if (dim_ > cap) {
    std::ostringstream os;
    os << "truncated space (N=" << n_sites << ", n_max=" << n_max << ") exceeds the dimension cap " << cap;
    throw CapacityError(os.str());
  }
}

std::size_t TruncatedSpace::stride(int site) const {
  std::size_t s = 1;
  for (int k = site + 1; k < n_sites_; ++k) s *= site_dim();
  return s;
}

std::size_t TruncatedSpace::index(std::span<const int> spins, std::span<const int> phonons) const {
  if (spins.size() != static_cast<std::size_t>(n_sites_) || phonons.size() != static_cast<std::size_t>(n_sites_))
    throw DomainError("spin and phonon lists must have one entry per site");
  std::size_t g = 0;
  for (int s = 0; s < n_sites_; ++s) {
    const int sp = spins[static_cast<std::size_t>(s)];
    const int ph = phonons[static_cast<std::size_t>(s)];
    if (sp < 0 || sp > 1 || ph < 0 || ph > n_max_) throw DomainError("local state outside the truncated space");
    g = g * site_dim() + static_cast<std::size_t>(sp * (n_max_ + 1) + ph);
  }
  return g;
}

int TruncatedSpace::spin(std::size_t global, int site) const {
  return static_cast<int>((global / stride(site)) % site_dim()) / (n_max_ + 1);
}

int TruncatedSpace::phonons(std::size_t global, int site) const {
  return static_cast<int>((global / stride(site)) % site_dim()) % (n_max_ + 1);
}

SparseOperator TruncatedSpace::embed(const Eigen::MatrixXcd& local, int site) const {
  if (site < 0 || site >= n_sites_) throw DomainError("site index out of range");
  const auto ld = static_cast<Eigen::Index>(site_dim());
  if (local.rows() != ld || local.cols() != ld) throw DomainError("local operator has the wrong dimension");
  const std::size_t st = stride(site);
  std::vector<Triplet> triplets;
  for (std::size_t col = 0; col < dim_; ++col) {
    const auto l = static_cast<Eigen::Index>((col / st) % site_dim());
    for (Eigen::Index r = 0; r < ld; ++r) {
      const cd v = local(r, l);
      if (v == cd{0.0, 0.0}) continue;
      const std::size_t row = col + static_cast<std::size_t>(r) * st - static_cast<std::size_t>(l) * st;
      triplets.emplace_back(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col), v);
    }
  }
  SparseOperator op(static_cast<Eigen::Index>(dim_), static_cast<Eigen::Index>(dim_));
  op.setFromTriplets(triplets.begin(), triplets.end());
  return op;
}

Eigen::MatrixXcd TruncatedSpace::local_sigma() const {
  const auto ld = static_cast<Eigen::Index>(site_dim());
  const Eigen::Index nf = n_max_ + 1;
  Eigen::MatrixXcd op = Eigen::MatrixXcd::Zero(ld, ld);
  for (Eigen::Index n = 0; n < nf; ++n) op(n, nf + n) = 1.0;
  return op;
}

Eigen::MatrixXcd TruncatedSpace::local_annihilate() const {
  const auto ld = static_cast<Eigen::Index>(site_dim());
  const Eigen::Index nf = n_max_ + 1;
  Eigen::MatrixXcd op = Eigen::MatrixXcd::Zero(ld, ld);
  for (Eigen::Index s = 0; s < 2; ++s)
    for (Eigen::Index n = 1; n < nf; ++n) op(s * nf + n - 1, s * nf + n) = std::sqrt(static_cast<double>(n));
  return op;
}

Eigen::MatrixXcd TruncatedSpace::local_create() const { return local_annihilate().adjoint(); }

Eigen::MatrixXcd TruncatedSpace::local_number() const {
  const auto ld = static_cast<Eigen::Index>(site_dim());
  const Eigen::Index nf = n_max_ + 1;
  Eigen::MatrixXcd op = Eigen::MatrixXcd::Zero(ld, ld);
  for (Eigen::Index s = 0; s < 2; ++s)
    for (Eigen::Index n = 0; n < nf; ++n) op(s * nf + n, s * nf + n) = static_cast<double>(n);
  return op;
}

JumpFamily build_jump_family(const GeometryConfig& geom, const KernelMatrices& kernels, const TruncatedSpace& space) {
  if (!(kernels.geom == geom)) throw ConsistencyError("kernels built from a different geometry");
  if (space.n_sites() != geom.n_atoms) throw ConsistencyError("truncated space has the wrong number of sites");

  const int n = geom.n_atoms;
  const double eta2 = geom.eta0 * geom.eta0;
  const auto dim = static_cast<Eigen::Index>(space.dim());

  const Eigen::MatrixXcd sigma = space.local_sigma();
  const Eigen::MatrixXcd a = space.local_annihilate();
  const Eigen::MatrixXcd ad = space.local_create();
  const Eigen::MatrixXcd one = Eigen::MatrixXcd::Identity(a.rows(), a.cols());
  const Eigen::MatrixXcd family_local[4] = {sigma, sigma * a, sigma * ad, sigma * (one + 2.0 * space.local_number())};

  std::vector<SparseOperator> jumps;
  jumps.reserve(static_cast<std::size_t>(4 * n));
  for (const auto& local : family_local)
    for (int j = 0; j < n; ++j) jumps.push_back(space.embed(local, j));

  auto block_matrix = [&](const Eigen::MatrixXd& zeroth, const Eigen::MatrixXd& second) {
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(4 * n, 4 * n);
    t.block(0, 0, n, n) = zeroth;
    t.block(n, n, n, n) = -eta2 * second;
    t.block(2 * n, 2 * n, n, n) = -eta2 * second;
    t.block(0, 3 * n, n, n) = 0.5 * eta2 * second;
    t.block(3 * n, 0, n, n) = 0.5 * eta2 * second;
    return t;
  };
  Eigen::MatrixXd gamma_tilde = block_matrix(kernels.gamma_mat, kernels.gamma_dd);
  Eigen::MatrixXd v_tilde = block_matrix(kernels.v_mat, kernels.v_dd);

  Eigen::MatrixXd v_offdiag = v_tilde;
  v_offdiag.diagonal().setZero();

  SparseOperator h_cond(dim, dim);
  std::vector<SparseOperator> recycled;
  recycled.reserve(jumps.size());
  for (Eigen::Index mp = 0; mp < 4 * n; ++mp) {
    const SparseOperator& j_mp = jumps[static_cast<std::size_t>(mp)];
    SparseOperator k_gamma = combine(jumps, gamma_tilde, mp, dim);
    SparseOperator k_v = combine(jumps, v_offdiag, mp, dim);
    // sum_m c_mm' J_m^dag J_m' = K^dag J_m' with K = sum_m c_mm' J_m (c real)
    SparseOperator kv_adj = k_v.adjoint();
    SparseOperator kg_adj = k_gamma.adjoint();
    h_cond -= SparseOperator(kv_adj * j_mp);
    h_cond += cd{0.0, -0.5} * SparseOperator(kg_adj * j_mp);
    recycled.push_back(std::move(k_gamma));
  }
  h_cond.prune(cd{0.0, 0.0});

  return JumpFamily{space, geom.eta0, std::move(jumps), std::move(gamma_tilde), std::move(v_tilde),
                    std::move(h_cond), std::move(recycled)};
}

DensityOperator ground_state(const TruncatedSpace& space) {
  const auto dim = static_cast<Eigen::Index>(space.dim());
  DensityOperator out{Eigen::MatrixXcd::Zero(dim, dim), 0.0};
  out.rho(0, 0) = 1.0;
  return out;
}

DensityOperator single_excitation_state(const TruncatedSpace& space, const Eigen::VectorXcd& spin_amplitudes,
                                        std::span<const int> phonons) {
  if (spin_amplitudes.size() != space.n_sites()) throw DomainError("one spin amplitude per site required");
  const double norm = spin_amplitudes.norm();
  if (norm == 0.0) throw DomainError("spin amplitudes must not all vanish");
  const auto dim = static_cast<Eigen::Index>(space.dim());
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(dim);
  std::vector<int> spins(static_cast<std::size_t>(space.n_sites()), 0);
  for (int j = 0; j < space.n_sites(); ++j) {
    spins[static_cast<std::size_t>(j)] = 1;
    psi(static_cast<Eigen::Index>(space.index(spins, phonons))) = spin_amplitudes(j) / norm;
    spins[static_cast<std::size_t>(j)] = 0;
  }
  return {psi * psi.adjoint(), 0.0};
}

Eigen::MatrixXcd master_rhs(const DensityOperator& state, const JumpFamily& family) {
  const Eigen::MatrixXcd& rho = state.rho;
  const auto dim = static_cast<Eigen::Index>(family.space.dim());
  if (rho.rows() != dim || rho.cols() != dim) throw DomainError("density matrix does not match the jump family");

  const SparseOperator& h = family.conditional_hamiltonian;
  const Eigen::MatrixXcd h_rho = h * rho;
  Eigen::MatrixXcd out = cd{0.0, -1.0} * h_rho;
  // -i (H rho - rho H^dag) = -i H rho + i (H rho^dag)^dag
  const Eigen::MatrixXcd h_rho_dag = h * rho.adjoint();
  out += cd{0.0, 1.0} * h_rho_dag.adjoint();
  for (std::size_t m = 0; m < family.jumps.size(); ++m) {
    if (family.recycled[m].nonZeros() == 0) continue;
    const Eigen::MatrixXcd k_rho_dag = family.recycled[m] * rho.adjoint();
    out += family.jumps[m] * k_rho_dag.adjoint();
  }
  return out;
}

std::vector<double> site_excitations(const TruncatedSpace& space, const Eigen::MatrixXcd& rho) {
  std::vector<double> pops(static_cast<std::size_t>(space.n_sites()), 0.0);
  for (std::size_t g = 0; g < space.dim(); ++g) {
    const double p = rho(static_cast<Eigen::Index>(g), static_cast<Eigen::Index>(g)).real();
    for (int j = 0; j < space.n_sites(); ++j)
      if (space.spin(g, j) == 1) pops[static_cast<std::size_t>(j)] += p;
  }
  return pops;
}

Trajectory evolve(const DensityOperator& rho0, const JumpFamily& family, double t_final, double dt,
                  int sample_every) {
  if (!(dt > 0.0)) throw DomainError("time step must be positive");
  if (!(t_final >= dt)) throw DomainError("t_final must be at least one time step");
  if (sample_every < 1) throw DomainError("sample_every must be positive");

  const long steps = std::lround(t_final / dt);
  const double eta4 = std::pow(family.eta0, 4);
  const double positivity_floor = -std::max(10.0 * eta4, 1e-10);
  const double trace0 = rho0.rho.trace().real();

  Trajectory traj;
  auto record = [&](const DensityOperator& s) {
    TrajectorySample sample;
    sample.t = s.time;
    sample.trace = s.rho.trace().real();
    sample.site_populations = site_excitations(family.space, s.rho);
    sample.excited_population = 0.0;
    for (double p : sample.site_populations) sample.excited_population += p;
    sample.min_eigenvalue = min_hermitian_eigenvalue(s.rho);
    sample.hermiticity_defect = (s.rho - s.rho.adjoint()).cwiseAbs().maxCoeff();
    sample.positivity_warning = sample.min_eigenvalue < positivity_floor;
    if (sample.positivity_warning) ++traj.positivity_warnings;
    if (!(std::abs(sample.trace - trace0) <= kTraceDriftLimit)) {
      std::ostringstream os;
      os << "trace drifted to " << sample.trace << " at t = " << s.time << "; reduce dt (currently " << dt << ")";
      throw IntegrationError(os.str());
    }
    traj.samples.push_back(std::move(sample));
  };

  DensityOperator state = rho0;
  record(state);
  for (long step = 1; step <= steps; ++step) {
    const Eigen::MatrixXcd k1 = master_rhs(state, family);
    const Eigen::MatrixXcd k2 = master_rhs({state.rho + 0.5 * dt * k1, 0.0}, family);
    const Eigen::MatrixXcd k3 = master_rhs({state.rho + 0.5 * dt * k2, 0.0}, family);
    const Eigen::MatrixXcd k4 = master_rhs({state.rho + dt * k3, 0.0}, family);
    state.rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    state.time = static_cast<double>(step) * dt;
    if (step % sample_every == 0 || step == steps) record(state);
  }
  traj.final_state = std::move(state);
  return traj;
}

ConditionalCheck conditional_generator_check(const GeometryConfig& geom, const KernelMatrices& kernels,
                                             const HybridBasis& basis, int n_max, std::size_t cap) {
  if (!(basis.geometry() == geom)) throw ConsistencyError("basis built from a different geometry");
  if (n_max < 0) n_max = geom.n_phonons;
  if (n_max < geom.n_phonons)
    throw DomainError("Fock cutoff n_max = " + std::to_string(n_max) + " cannot hold the " +
                      std::to_string(geom.n_phonons) + "-phonon sector");

  const TruncatedSpace space(geom.n_atoms, n_max, cap);
  const JumpFamily family = build_jump_family(geom, kernels, space);
  const EffectiveHamiltonian heff = build_heff(geom, kernels, basis);

  const std::size_t dim = basis.size();
  std::vector<Eigen::Index> embedded(dim);
  std::vector<int> spins(static_cast<std::size_t>(geom.n_atoms), 0);
  for (std::size_t k = 0; k < dim; ++k) {
    const auto s = basis.state(k);
    spins.assign(spins.size(), 0);
    spins[static_cast<std::size_t>(s.spin_site)] = 1;
    embedded[k] = static_cast<Eigen::Index>(space.index(spins, s.occupation));
  }

  const SparseOperator& hc = family.conditional_hamiltonian;
  double imag_dev = 0.0, real_dev_plus = 0.0, real_dev_minus = 0.0;
  for (std::size_t r = 0; r < dim; ++r) {
    for (std::size_t c = 0; c < dim; ++c) {
      const cd lhs = hc.coeff(embedded[r], embedded[c]);
      const cd rhs = heff.matrix(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
      imag_dev = std::max(imag_dev, std::abs(lhs.imag() - rhs.imag()));
      real_dev_plus = std::max(real_dev_plus, std::abs(lhs.real() - rhs.real()));
      real_dev_minus = std::max(real_dev_minus, std::abs(lhs.real() + rhs.real()));
    }
  }
  ConditionalCheck out;
  out.imag_deviation = imag_dev;
  out.real_sign = real_dev_plus <= real_dev_minus ? 1 : -1;
  out.real_deviation = std::min(real_dev_plus, real_dev_minus);
  out.max_deviation = std::max(out.imag_deviation, out.real_deviation);
  return out;
}

}  // namespace hr
