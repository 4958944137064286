#include "hybrid_radiance/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <sstream>

#include "hybrid_radiance/errors.hpp"

namespace hr {
namespace {

// Makes the largest-magnitude component real and positive. The first index
// within a relative 1e-10 of the maximum wins so ties resolve deterministically.
void fix_phase(Eigen::VectorXcd& v) {
  const double max_abs = v.cwiseAbs().maxCoeff();
  if (max_abs == 0.0) return;
  Eigen::Index pivot = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) >= max_abs * (1.0 - 1e-10)) {
      pivot = i;
      break;
    }
  }
  v *= std::conj(v(pivot)) / std::abs(v(pivot));
  v(pivot) = std::abs(v(pivot));
}

struct SolvedPair {
  std::complex<double> value;
  Eigen::VectorXcd vector;
};

}  // namespace

std::string matrix_fingerprint(const Eigen::MatrixXcd& h) {
  std::uint64_t hash = 1469598103934665603ULL;  // FNV-1a over the raw entries
  const auto* bytes = reinterpret_cast<const unsigned char*>(h.data());
  const std::size_t n_bytes = static_cast<std::size_t>(h.size()) * sizeof(std::complex<double>);
  for (std::size_t i = 0; i < n_bytes; ++i) {
    hash ^= bytes[i];
    hash *= 1099511628211ULL;
  }
  std::ostringstream os;
  os << "dim=" << h.rows() << "x" << h.cols() << " frob=" << h.norm()
     << " max=" << (h.size() ? h.cwiseAbs().maxCoeff() : 0.0) << " fnv=" << std::hex << hash;
  return os.str();
}

std::vector<EigenMode> eigendecompose(const Eigen::MatrixXcd& h) {
  if (h.rows() != h.cols()) throw DomainError("eigendecompose requires a square matrix");
  if (!h.allFinite()) throw EigenSolverError("matrix has non-finite entries", matrix_fingerprint(h));
  const Eigen::Index dim = h.rows();
  if (dim == 0) return {};

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(h, true);
  if (solver.info() != Eigen::Success)
    throw EigenSolverError("complex eigensolver did not converge", matrix_fingerprint(h));

  std::vector<SolvedPair> pairs;
  pairs.reserve(static_cast<std::size_t>(dim));
  for (Eigen::Index k = 0; k < dim; ++k) {
    Eigen::VectorXcd v = solver.eigenvectors().col(k);
    v.normalize();
    fix_phase(v);
    pairs.push_back({solver.eigenvalues()(k), std::move(v)});
  }

  std::vector<std::size_t> order(pairs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double ra = -2.0 * pairs[a].value.imag(), rb = -2.0 * pairs[b].value.imag();
    if (ra != rb) return ra < rb;
    return pairs[a].value.real() < pairs[b].value.real();
  });

  const double tol = 1e-8 * h.cwiseAbs().maxCoeff() * static_cast<double>(dim);
  std::vector<EigenMode> modes;
  modes.reserve(pairs.size());
  for (std::size_t m = 0; m < order.size(); ++m) {
    auto& p = pairs[order[m]];
    EigenMode mode;
    mode.index = m;
    mode.eigenvalue = p.value;
    mode.rate = -2.0 * p.value.imag();
    mode.shift = p.value.real();
    mode.residual = (h * p.vector - p.value * p.vector).norm();
    mode.eigenvector = std::move(p.vector);
    if (!(mode.residual <= tol)) {
      std::ostringstream os;
      os << "eigenpair residual " << mode.residual << " exceeds " << tol;
      throw EigenSolverError(os.str(), matrix_fingerprint(h));
    }
    modes.push_back(std::move(mode));
  }
  return modes;
}

std::vector<EigenMode> eigendecompose(const EffectiveHamiltonian& h) { return eigendecompose(h.matrix); }

std::vector<SeparableMatch> match_separable(const std::vector<EigenMode>& modes, const Eigen::MatrixXcd& block,
                                            const HybridBasis& basis) {
  if (block.rows() != basis.n_sites() || block.cols() != basis.n_sites())
    throw DomainError("separable block size must equal the number of sites");
  if (modes.size() != basis.size()) throw DomainError("mode count does not match the basis dimension");

  const auto block_modes = eigendecompose(block);
  std::vector<bool> taken(modes.size(), false);
  std::vector<SeparableMatch> matches;

  for (const auto& bm : block_modes) {
    const Eigen::VectorXcd product = center_of_mass_product(basis, bm.eigenvector);

    std::vector<std::size_t> cluster;
    for (std::size_t m = 0; m < modes.size(); ++m)
      if (std::abs(modes[m].eigenvalue - bm.eigenvalue) < kSeparableEigenvalueTol) cluster.push_back(m);

    // A single candidate is tested by direct overlap; a near-degenerate
    // cluster by the weight of the product vector in the cluster's span.
    double weight = 0.0;
    if (cluster.size() == 1) {
      weight = std::norm(modes[cluster.front()].eigenvector.dot(product));
    } else if (cluster.size() > 1) {
      Eigen::MatrixXcd span(product.size(), static_cast<Eigen::Index>(cluster.size()));
      for (std::size_t c = 0; c < cluster.size(); ++c)
        span.col(static_cast<Eigen::Index>(c)) = modes[cluster[c]].eigenvector;
      Eigen::HouseholderQR<Eigen::MatrixXcd> qr(span);
      const Eigen::Index rank = std::min<Eigen::Index>(span.cols(), span.rows());
      const Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(span.rows(), rank);
      weight = (q.adjoint() * product).squaredNorm();
    }

    std::size_t best = modes.size();
    double best_overlap = -1.0;
    for (std::size_t m : cluster) {
      if (taken[m]) continue;
      const double ov = std::norm(modes[m].eigenvector.dot(product));
      if (ov > best_overlap) {
        best_overlap = ov;
        best = m;
      }
    }

    if (best == modes.size() || weight <= 1.0 - kSeparableOverlapTol) {
      std::ostringstream os;
      os << "no separable mode for block eigenvalue " << bm.eigenvalue << " (product weight " << weight
         << "); candidates within " << kSeparableEigenvalueTol << ":";
      for (std::size_t m : cluster) os << " m=" << m << " E=" << modes[m].eigenvalue << (taken[m] ? "(taken)" : "");
      throw DegeneracyAmbiguityError(os.str());
    }
    taken[best] = true;
    matches.push_back({best, bm.eigenvalue, weight});
  }
  return matches;
}

}  // namespace hr
