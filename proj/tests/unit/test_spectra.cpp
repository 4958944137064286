#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "doctest.h"
#include "hybrid_radiance/entanglement.hpp"
#include "hybrid_radiance/errors.hpp"
#include "hybrid_radiance/heff.hpp"
#include "hybrid_radiance/spectra.hpp"
#include "oracles.hpp"

using namespace hr;
using cd = std::complex<double>;
using std::numbers::pi;

namespace {

GeometryConfig geometry(int n, int nph, double d, double eta) {
  GeometryConfig g;
  g.n_atoms = n;
  g.n_phonons = nph;
  g.spacing = d;
  g.eta0 = eta;
  return g;
}

}  // namespace

TEST_SUITE("spectra") {

TEST_CASE("two atoms without phonons: sub- and superradiant rates") {
  GeometryConfig g = geometry(2, 0, 0.2, 0.0);
  auto k = build_matrices(g);
  auto modes = eigendecompose(build_heff(g, k, HybridBasis(g)));
  REQUIRE(modes.size() == 2);
  CHECK(modes[0].rate == doctest::Approx(1.0 - k.gamma_mat(0, 1)).epsilon(1e-13));
  CHECK(modes[1].rate == doctest::Approx(1.0 + k.gamma_mat(0, 1)).epsilon(1e-13));
}

TEST_CASE("diagonal input returns its diagonal exactly") {
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(4, 4);
  d.diagonal() << cd(0.3, -0.1), cd(-1.0, -0.7), cd(2.0, -0.2), cd(0.0, -0.05);
  auto modes = eigendecompose(d);
  std::vector<cd> got, want;
  for (Eigen::Index i = 0; i < 4; ++i) want.push_back(d(i, i));
  for (const auto& m : modes) got.push_back(m.eigenvalue);
  std::sort(want.begin(), want.end(), [](cd a, cd b) { return a.imag() > b.imag(); });
  CHECK(got == want);
}

TEST_CASE("mode bookkeeping") {
  GeometryConfig g = geometry(4, 2, 0.2, 0.3);
  auto h = build_heff(g, build_matrices(g), HybridBasis(g));
  auto modes = eigendecompose(h);
  const double hmax = h.matrix.cwiseAbs().maxCoeff();
  cd sum{};
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const auto& m = modes[i];
    CHECK(m.index == i);
    CHECK(m.rate == -2.0 * m.eigenvalue.imag());
    CHECK(m.shift == m.eigenvalue.real());
    CHECK(std::abs(m.eigenvector.norm() - 1.0) < 1e-12);
    CHECK(m.residual <= 1e-8 * hmax * static_cast<double>(h.matrix.rows()));
    CHECK((h.matrix * m.eigenvector - m.eigenvalue * m.eigenvector).norm() == doctest::Approx(m.residual));
    // pivot: first component within 1e-10 of the largest magnitude
    const double top = m.eigenvector.cwiseAbs().maxCoeff();
    Eigen::Index arg = 0;
    while (std::abs(m.eigenvector(arg)) < top * (1.0 - 1e-10)) ++arg;
    CHECK(m.eigenvector(arg).imag() == 0.0);
    CHECK(m.eigenvector(arg).real() > 0.0);
    if (i > 0) CHECK(modes[i - 1].rate <= m.rate);
    sum += m.eigenvalue;
  }
  CHECK(std::abs(sum - h.matrix.trace()) <= 1e-8 * std::abs(h.matrix.trace()));
}

TEST_CASE("spectrum of H equals spectrum of its transpose") {
  GeometryConfig g = geometry(3, 2, 0.15, 0.25);
  auto h = build_heff(g, build_matrices(g), HybridBasis(g));
  auto a = eigendecompose(h.matrix);
  auto b = eigendecompose(Eigen::MatrixXcd(h.matrix.transpose()));
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i].eigenvalue - b[i].eigenvalue) < 1e-12);
}

TEST_CASE("eta0 = 0 rates are those of M with multiplicity C(N+n_ph-1, n_ph)") {
  for (auto [n, nph] : {std::pair{4, 1}, {3, 2}, {5, 2}}) {
    GeometryConfig g = geometry(n, nph, 0.2, 0.0);
    auto k = build_matrices(g);
    auto modes = eigendecompose(build_heff(g, k, HybridBasis(g)));
    auto m_modes = eigendecompose(k.m_mat);
    const std::size_t mult = phonon_configuration_count(n, nph);
    REQUIRE(modes.size() == m_modes.size() * mult);
    for (std::size_t i = 0; i < modes.size(); ++i) {
      CHECK(std::abs(modes[i].rate - m_modes[i / mult].rate) < 1e-10);
      CHECK(modes[i].rate >= -1e-10);
    }
  }
}

TEST_CASE("rates stay above the O(eta0^4) floor") {
  for (double eta : {0.1, 0.2, 0.3}) {
    GeometryConfig g = geometry(5, 2, 0.2, eta);
    auto modes = eigendecompose(build_heff(g, build_matrices(g), HybridBasis(g)));
    CHECK(modes.front().rate >= -10 * std::pow(eta, 4));
  }
}

TEST_CASE("rate branches are continuous along the eta0 scan") {
  std::vector<double> prev;
  for (int i = 0; i <= 30; ++i) {
    GeometryConfig g = geometry(5, 2, 0.2, 0.01 * i);
    auto modes = eigendecompose(build_heff(g, build_matrices(g), HybridBasis(g)));
    std::vector<double> rates;
    for (const auto& m : modes) rates.push_back(m.rate);
    if (!prev.empty()) {
      double jump = 0.0;
      for (std::size_t j = 0; j < rates.size(); ++j) jump = std::max(jump, std::abs(rates[j] - prev[j]));
      CHECK(jump < 0.05);
    }
    prev = rates;
  }
}

TEST_CASE("non-finite input raises an eigensolver error with a fingerprint") {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(3, 3);
  m(1, 2) = cd(std::nan(""), 0.0);
  try {
    eigendecompose(m);
    FAIL("expected EigenSolverError");
  } catch (const EigenSolverError& e) {
    CHECK_FALSE(e.fingerprint().empty());
  }
  CHECK_THROWS_AS(eigendecompose(Eigen::MatrixXcd::Zero(2, 3)), DomainError);
  CHECK(matrix_fingerprint(m) == matrix_fingerprint(m));
}

TEST_CASE("separable matching") {
  SUBCASE("five matches at eta0 = 0.3") {
    GeometryConfig g = geometry(5, 2, 0.2, 0.3);
    auto k = build_matrices(g);
    HybridBasis b(g);
    auto modes = eigendecompose(build_heff(g, k, b));
    auto block = separable_block(g, k);
    auto matches = match_separable(modes, block, b);
    REQUIRE(matches.size() == 5);
    std::set<std::size_t> idx;
    for (const auto& m : matches) {
      idx.insert(m.mode_index);
      CHECK(std::abs(modes[m.mode_index].eigenvalue - m.block_eigenvalue) < 1e-9);
      CHECK(m.overlap > 1 - 1e-8);
      CHECK(von_neumann_entropy(reduce_spin(modes[m.mode_index].eigenvector, b)) < 1e-8);
    }
    CHECK(idx.size() == 5);
  }
  SUBCASE("eta0 = 0: matched modes carry the centre-of-mass phonon state") {
    GeometryConfig g = geometry(3, 2, 0.2, 0.0);
    auto k = build_matrices(g);
    HybridBasis b(g);
    auto modes = eigendecompose(build_heff(g, k, b));
    auto matches = match_separable(modes, separable_block(g, k), b);
    REQUIRE(matches.size() == 3);
    for (const auto& m : matches) CHECK(m.overlap > 1 - 1e-8);
  }
  SUBCASE("two atoms with one phonon match the n_a = 0 levels") {
    GeometryConfig g = geometry(2, 1, 0.2, 0.3);
    auto k = build_matrices(g);
    HybridBasis b(g);
    auto modes = eigendecompose(build_heff(g, k, b));
    auto matches = match_separable(modes, separable_block(g, k), b);
    REQUIRE(matches.size() == 2);
    auto pair = two_atom_spectrum(g, k);
    for (const auto& m : matches) {
      bool found = false;
      for (const auto& l : pair.levels) {
        if (l.n_antisymmetric == 0 && std::abs(l.energy - modes[m.mode_index].eigenvalue) < 1e-12) found = true;
      }
      CHECK(found);
    }
  }
  SUBCASE("missing modes are reported as ambiguity") {
    GeometryConfig g = geometry(3, 1, 0.2, 0.3);
    auto k = build_matrices(g);
    HybridBasis b(g);
    auto modes = eigendecompose(build_heff(g, k, b));
    auto block = separable_block(g, k);
    auto matches = match_separable(modes, block, b);
    // Replace one separable mode by a copy of a non-separable one.
    std::size_t victim = matches[0].mode_index;
    std::size_t donor = victim == 0 ? 1 : 0;
    while (std::any_of(matches.begin(), matches.end(), [&](const SeparableMatch& m) { return m.mode_index == donor; }))
      ++donor;
    modes[victim] = modes[donor];
    modes[victim].index = victim;
    CHECK_THROWS_AS(match_separable(modes, block, b), DegeneracyAmbiguityError);
  }
}

}  // TEST_SUITE
