#include <cmath>
#include <numbers>

#include "doctest.h"
#include "hybrid_radiance/entanglement.hpp"
#include "hybrid_radiance/errors.hpp"
#include "hybrid_radiance/heff.hpp"
#include "hybrid_radiance/spectra.hpp"

using namespace hr;
using cd = std::complex<double>;

namespace {

GeometryConfig geometry(int n, int nph, double d, double eta) {
  GeometryConfig g;
  g.n_atoms = n;
  g.n_phonons = nph;
  g.spacing = d;
  g.eta0 = eta;
  return g;
}

ReducedSpinState diagonal(std::vector<double> p) {
  ReducedSpinState s;
  s.rho = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(p.size()), static_cast<Eigen::Index>(p.size()));
  s.populations = Eigen::VectorXd::Map(p.data(), static_cast<Eigen::Index>(p.size()));
  for (std::size_t i = 0; i < p.size(); ++i) s.rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = p[i];
  return s;
}

}  // namespace

TEST_SUITE("entanglement") {

TEST_CASE("product state is pure") {
  HybridBasis b(geometry(3, 2, 0.2, 0.0));
  Eigen::VectorXcd spin(3);
  spin << cd(0.6, 0.0), cd(0.0, 0.48), cd(-0.64, 0.0);
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(b.size()));
  const std::size_t cfg = *b.configuration_index({1, 0, 1});
  for (int j = 0; j < 3; ++j) psi(static_cast<Eigen::Index>(b.index(j, cfg))) = spin(j);
  auto r = reduce_spin(psi, b);
  CHECK((r.rho - spin * spin.adjoint()).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(std::abs((r.rho * r.rho).trace().real() - 1.0) < 1e-14);
  CHECK(std::abs(von_neumann_entropy(r)) < 1e-12);
}

TEST_CASE("maximally entangled pair") {
  HybridBasis b(geometry(2, 1, 0.2, 0.0));
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(4);
  psi(static_cast<Eigen::Index>(*b.index_of({0, {1, 0}}))) = 1 / std::sqrt(2.0);
  psi(static_cast<Eigen::Index>(*b.index_of({1, {0, 1}}))) = 1 / std::sqrt(2.0);
  auto r = reduce_spin(psi, b);
  CHECK(r.rho(0, 0).real() == doctest::Approx(0.5));
  CHECK(r.rho(1, 1).real() == doctest::Approx(0.5));
  CHECK(std::abs(r.rho(0, 1)) < 1e-16);
  CHECK(von_neumann_entropy(r) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
}

TEST_CASE("entropy of simple spectra") {
  CHECK(von_neumann_entropy(diagonal({1.0, 0.0, 0.0})) == 0.0);
  CHECK(von_neumann_entropy(diagonal({0.5, 0.5})) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  for (int n : {3, 5, 8}) {
    CHECK(von_neumann_entropy(diagonal(std::vector<double>(n, 1.0 / n))) ==
          doctest::Approx(std::log(n)).epsilon(1e-14));
  }
  CHECK(von_neumann_entropy(diagonal({-5e-11, 1.0 + 5e-11})) == doctest::Approx(0.0));
  CHECK_THROWS_AS(von_neumann_entropy(diagonal({-1e-3, 1.001})), NumericalError);
}

TEST_CASE("unnormalized input is a domain error") {
  HybridBasis b(geometry(2, 1, 0.2, 0.0));
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(4);
  psi(0) = 1.0 + 1e-8;
  CHECK_THROWS_AS(reduce_spin(psi, b), DomainError);
  CHECK_THROWS_AS(reduce_spin(Eigen::VectorXcd::Zero(3), b), DomainError);
}

TEST_CASE("reduced states of eigenmodes are valid density matrices") {
  GeometryConfig g = geometry(5, 2, 0.2, 0.3);
  HybridBasis b(g);
  auto modes = eigendecompose(build_heff(g, build_matrices(g), b));
  int pure = 0;
  for (const auto& m : modes) {
    auto r = reduce_spin(m.eigenvector, b);
    CHECK(std::abs(r.rho.trace().real() - 1.0) < 1e-10);
    CHECK((r.rho - r.rho.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(r.populations.minCoeff() >= -1e-10);
    CHECK(r.populations.maxCoeff() <= 1 + 1e-10);
    double s = von_neumann_entropy(r);
    CHECK(s >= 0.0);
    CHECK(s <= std::log(5.0) + 1e-9);
    pure += s < 1e-8;
    // global phase invariance
    Eigen::VectorXcd rotated = m.eigenvector * std::polar(1.0, 0.77);
    CHECK(std::abs(von_neumann_entropy(reduce_spin(rotated, b)) - s) < 1e-12);
  }
  CHECK(pure == 5);
}

TEST_CASE("entropy scan") {
  SUBCASE("no coupling, no entanglement") {
    std::vector<int> ns{2, 3, 4, 5};
    for (const auto& row : entropy_scan(geometry(2, 1, 0.2, 0.0), ns)) CHECK(row.max_entropy < 1e-10);
  }
  SUBCASE("two atoms are bounded by ln 2") {
    std::vector<int> ns{2};
    auto rows = entropy_scan(geometry(2, 1, 0.1, 0.3), ns);
    CHECK(rows[0].max_entropy <= std::log(2.0) + 1e-12);
    CHECK(rows[0].ln_n == doctest::Approx(std::log(2.0)));
    CHECK(rows[0].spacing == 0.1);
  }
  SUBCASE("denser chains approach ln N faster") {
    std::vector<int> ns{2, 3, 4, 5, 6, 7, 8};
    auto dense = entropy_scan(geometry(2, 1, 0.1, 0.3), ns);
    auto sparse = entropy_scan(geometry(2, 1, 0.4, 0.3), ns);
    for (std::size_t i = 1; i < dense.size(); ++i) CHECK(dense[i].max_entropy >= dense[i - 1].max_entropy);
    CHECK(dense.back().ln_n - dense.back().max_entropy < sparse.back().ln_n - sparse.back().max_entropy);
  }
}

}  // TEST_SUITE
