// One line per acceptance criterion; exit status is the number of failures.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hybrid_radiance/band.hpp"
#include "hybrid_radiance/entanglement.hpp"
#include "hybrid_radiance/heff.hpp"
#include "hybrid_radiance/kernels.hpp"
#include "hybrid_radiance/lindblad.hpp"
#include "hybrid_radiance/spectra.hpp"

using namespace hr;
using cd = std::complex<double>;
using std::numbers::pi;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

struct Criterion {
  const char* name;
  double time_limit_s;  // <= 0: none
  std::function<Outcome()> body;
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

GeometryConfig geometry(int n, int nph, double d, double eta, double phi = pi / 2) {
  GeometryConfig g;
  g.n_atoms = n;
  g.n_phonons = nph;
  g.spacing = d;
  g.eta0 = eta;
  g.phi = phi;
  return g;
}

// Greedy nearest pairing of two equally sized eigenvalue lists; returns the
// worst relative mismatch.
double worst_relative_pairing(std::vector<cd> numeric, const std::vector<cd>& reference) {
  if (numeric.size() != reference.size()) return INFINITY;
  double worst = 0.0;
  for (const cd& r : reference) {
    auto it = std::min_element(numeric.begin(), numeric.end(),
                               [&](cd a, cd b) { return std::abs(a - r) < std::abs(b - r); });
    worst = std::max(worst, std::abs(*it - r) / std::abs(r));
    numeric.erase(it);
  }
  return worst;
}

Outcome two_atom_closed_form() {
  double worst_e = 0.0, worst_rate = 0.0;
  int cases = 0;
  for (int nph : {0, 1, 2})
    for (double eta : {0.0, 0.1, 0.3})
      for (double d : {0.2, 0.318, 0.5})
        for (double phi : {0.0, pi / 2}) {
          GeometryConfig g = geometry(2, nph, d, eta, phi);
          KernelMatrices k = build_matrices(g);
          auto h = build_heff(g, k, HybridBasis(g));
          auto modes = eigendecompose(h);
          std::vector<cd> numeric, closed;
          for (const auto& m : modes) numeric.push_back(m.eigenvalue);
          std::vector<double> numeric_rates, formula_rates;
          for (const auto& m : modes) numeric_rates.push_back(m.rate);
          for (const auto& l : two_atom_spectrum(g, k).levels) {
            closed.push_back(l.energy);
            const double s = l.parity == Parity::symmetric ? 1.0 : -1.0;
            formula_rates.push_back(1.0 + s * k.gamma_mat(0, 1) +
                                    s * eta * eta * (2 * l.n_antisymmetric + 1) * k.gamma_dd(0, 1));
          }
          worst_e = std::max(worst_e, worst_relative_pairing(numeric, closed));
          std::sort(numeric_rates.begin(), numeric_rates.end());
          std::sort(formula_rates.begin(), formula_rates.end());
          for (std::size_t i = 0; i < formula_rates.size(); ++i) {
            worst_rate = std::max(worst_rate, std::abs(numeric_rates[i] - formula_rates[i]) / std::abs(formula_rates[i]));
          }
          ++cases;
        }
  return {worst_e <= 1e-12 && worst_rate <= 1e-12,
          std::to_string(cases) + " configurations, max rel energy err " + fmt(worst_e) + ", max rel rate err " +
              fmt(worst_rate)};
}

Outcome magic_distance() {
  MagicDistance m = find_kappa0(pi / 2);
  double spread = 0.0;
  std::vector<double> base;
  for (int i = 0; i <= 30; ++i) {
    GeometryConfig g = geometry(2, 2, m.d0_over_lambda, 0.01 * i);
    auto levels = two_atom_spectrum(g, build_matrices(g)).levels;
    for (std::size_t j = 0; j < levels.size(); ++j) {
      if (i == 0) base.push_back(levels[j].rate);
      spread = std::max(spread, std::abs(levels[j].rate - base[j]));
    }
  }
  return {std::abs(m.kappa0 - 2.0) <= 0.05 && spread < 1e-10,
          "kappa0 = " + fmt(m.kappa0) + ", d0/lambda = " + fmt(m.d0_over_lambda) + ", rate spread over eta0 in [0,0.3] " +
              fmt(spread)};
}

long double gamma_ld(long double k, long double phi) {
  long double f = std::sin(phi) * std::sin(phi), g = 1 - 3 * std::cos(phi) * std::cos(phi);
  return 1.5L * (f * std::sin(k) / k + g * (std::cos(k) / (k * k) - std::sin(k) / (k * k * k)));
}
long double v_ld(long double k, long double phi) {
  long double f = std::sin(phi) * std::sin(phi), g = 1 - 3 * std::cos(phi) * std::cos(phi);
  return 0.75L * (f * std::cos(k) / k - g * (std::sin(k) / (k * k) + std::cos(k) / (k * k * k)));
}

Outcome derivative_oracle() {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> kd(0.3, 20.0), pd(0.0, pi);
  const long double h = 1e-4L;
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double k = kd(rng), phi = pd(rng);
    for (auto kind : {KernelKind::gamma, KernelKind::v}) {
      auto fn = kind == KernelKind::gamma ? gamma_ld : v_ld;
      const long double fd = (fn(k + h, phi) - 2 * fn(k, phi) + fn(k - h, phi)) / (h * h);
      const double an = kernel_second_derivative(k, phi, kind);
      worst = std::max(worst, static_cast<double>(std::abs(an - fd) / std::abs(fd)));
    }
  }
  return {worst <= 1e-6, "200 comparisons, max relative deviation " + fmt(worst)};
}

Outcome subradiant_band() {
  GeometryConfig g = geometry(2, 0, 0.2, 0.0);
  auto grid = brillouin_grid(g.spacing, 801);
  auto band = band_scan(g, grid, 100000, SumMethod::accelerated);
  double worst_outside = 0.0, at_zero = NAN;
  int outside = 0;
  for (const auto& p : band) {
    if (std::abs(p.q) > 1.02) {
      worst_outside = std::max(worst_outside, std::abs(p.rate));
      ++outside;
    }
    if (p.q == 0.0) at_zero = p.rate;
  }
  return {outside > 0 && worst_outside <= 5e-3 && at_zero > 0.1,
          std::to_string(outside) + " points beyond 1.02 k0, max |rate| " + fmt(worst_outside) + ", rate(q=0) " +
              fmt(at_zero)};
}

struct CensusResult {
  bool pass = true;
  std::string detail;
  double max_entropy = 0.0;
  double min_entropy = 0.0;
};

CensusResult census(double eta) {
  CensusResult r;
  GeometryConfig g = geometry(5, 2, 0.2, eta);
  HybridBasis b(g);
  KernelMatrices k = build_matrices(g);
  auto modes = eigendecompose(build_heff(g, k, b));
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> block(separable_block(g, k));
  std::vector<std::size_t> pure;
  r.min_entropy = INFINITY;
  for (const auto& m : modes) {
    double s = von_neumann_entropy(reduce_spin(m.eigenvector, b));
    r.max_entropy = std::max(r.max_entropy, s);
    r.min_entropy = std::min(r.min_entropy, s);
    if (s < 1e-8) pure.push_back(m.index);
  }
  double worst_eig = 0.0, worst_overlap = 0.0;
  std::vector<bool> used(5, false);
  for (std::size_t idx : pure) {
    // nearest block eigenvalue
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < 5; ++i)
      if (std::abs(block.eigenvalues()(i) - modes[idx].eigenvalue) <
          std::abs(block.eigenvalues()(best) - modes[idx].eigenvalue))
        best = i;
    used[static_cast<std::size_t>(best)] = true;
    worst_eig = std::max(worst_eig, std::abs(block.eigenvalues()(best) - modes[idx].eigenvalue));
    Eigen::VectorXcd product = center_of_mass_product(b, block.eigenvectors().col(best));
    double overlap = std::norm(product.dot(modes[idx].eigenvector));
    worst_overlap = std::max(worst_overlap, 1.0 - overlap);
  }
  bool all_used = std::all_of(used.begin(), used.end(), [](bool u) { return u; });
  r.pass = modes.size() == 75 && pure.size() == 5 && all_used && worst_eig <= 1e-9 && worst_overlap < 1e-8;
  r.detail = "eta0=" + fmt(eta) + ": " + std::to_string(pure.size()) + " pure modes of " +
             std::to_string(modes.size()) + ", max |E - E_block| " + fmt(worst_eig) + ", max 1-overlap " +
             fmt(worst_overlap);
  return r;
}

Outcome separable_census() {
  auto a = census(0.1), b = census(0.3);
  return {a.pass && b.pass, a.detail + "; " + b.detail};
}

Outcome entropy_bounds_and_trend() {
  auto a = census(0.1), b = census(0.3);
  const double lo = std::min(a.min_entropy, b.min_entropy), hi = std::max(a.max_entropy, b.max_entropy);
  bool bounds = lo >= 0.0 && hi <= std::log(5.0) + 1e-9;
  std::vector<int> ns{2, 3, 4, 5, 6, 7, 8};
  auto dense = entropy_scan(geometry(2, 1, 0.1, 0.3), ns);
  auto sparse = entropy_scan(geometry(2, 1, 0.4, 0.3), ns);
  bool monotone = true;
  for (std::size_t i = 1; i < dense.size(); ++i) monotone = monotone && dense[i].max_entropy >= dense[i - 1].max_entropy;
  const double gap_dense = dense.back().ln_n - dense.back().max_entropy;
  const double gap_sparse = sparse.back().ln_n - sparse.back().max_entropy;
  std::ostringstream os;
  os << "S in [" << fmt(lo) << ", " << fmt(hi) << "], max S(N=2..8, d=0.1) =";
  for (const auto& r : dense) os << ' ' << fmt(r.max_entropy);
  os << ", ln8 - maxS: d=0.1 " << fmt(gap_dense) << " vs d=0.4 " << fmt(gap_sparse);
  return {bounds && monotone && gap_dense < gap_sparse, os.str()};
}

Outcome lindblad_oracle() {
  double worst_imag = 0.0;
  for (auto [n, nph] : {std::pair{2, 1}, {2, 2}, {3, 1}}) {
    GeometryConfig g = geometry(n, nph, 0.2, 0.2);
    auto check = conditional_generator_check(g, build_matrices(g), HybridBasis(g));
    worst_imag = std::max(worst_imag, check.imag_deviation);
  }

  // trace over gamma t in [0, 5]
  double worst_trace = 0.0;
  {
    GeometryConfig g = geometry(2, 1, 0.2, 0.2);
    auto f = build_jump_family(g, build_matrices(g), TruncatedSpace(2, 2));
    Eigen::VectorXcd amp(2);
    amp << 1.0, 1.0;
    auto traj = evolve(single_excitation_state(f.space, amp, std::vector<int>{1, 0}), f, 5.0, 1e-3, 100);
    for (const auto& s : traj.samples) worst_trace = std::max(worst_trace, std::abs(s.trace - 1.0));
  }

  double single_err = 0.0;
  {
    GeometryConfig g = geometry(1, 0, 0.2, 0.0);
    auto f = build_jump_family(g, build_matrices(g), TruncatedSpace(1, 1));
    Eigen::VectorXcd up(1);
    up << 1.0;
    auto traj = evolve(single_excitation_state(f.space, up, std::vector<int>{0}), f, 5.0, 1e-3, 10);
    for (const auto& s : traj.samples) single_err = std::max(single_err, std::abs(s.excited_population - std::exp(-s.t)));
  }

  double pair_err = 0.0;
  {
    GeometryConfig g = geometry(2, 0, 0.2, 0.0);
    auto k = build_matrices(g);
    auto f = build_jump_family(g, k, TruncatedSpace(2, 0));
    Eigen::VectorXcd amp(2);
    amp << 1.0, 1.0;
    auto traj = evolve(single_excitation_state(f.space, amp, std::vector<int>{0, 0}), f, 2.0, 1e-3, 100);
    const double expected = 1.0 + k.gamma_mat(0, 1);
    for (const auto& s : traj.samples) {
      if (s.t <= 0.0) continue;
      pair_err = std::max(pair_err, std::abs(-std::log(s.excited_population) / s.t - expected) / expected);
    }
  }
  return {worst_imag < 1e-10 && worst_trace <= 1e-9 && single_err <= 1e-6 && pair_err <= 1e-4,
          "imag deviation " + fmt(worst_imag) + ", trace drift " + fmt(worst_trace) + ", single-atom err " +
              fmt(single_err) + ", pair rate rel err " + fmt(pair_err)};
}

Outcome eta0_degeneracy() {
  GeometryConfig g = geometry(4, 1, 0.2, 0.0);
  KernelMatrices k = build_matrices(g);
  auto modes = eigendecompose(build_heff(g, k, HybridBasis(g)));
  auto m_modes = eigendecompose(k.m_mat);
  double worst = 0.0;
  bool shape = modes.size() == 16 && m_modes.size() == 4;
  if (shape) {
    for (std::size_t i = 0; i < 16; ++i) worst = std::max(worst, std::abs(modes[i].rate - m_modes[i / 4].rate));
  }
  return {shape && worst <= 1e-10, std::to_string(modes.size()) + " rates onto 4 rates of M x4, max deviation " + fmt(worst)};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"two-atom closed form", 1.0, two_atom_closed_form},
      {"magic distance", 1.0, magic_distance},
      {"derivative oracle", 0.0, derivative_oracle},
      {"subradiant band", 30.0, subradiant_band},
      {"separable-mode census", 10.0, separable_census},
      {"entropy bounds and trend", 0.0, entropy_bounds_and_trend},
      {"lindblad oracle", 60.0, lindblad_oracle},
      {"eta0 = 0 degeneracy", 0.0, eta0_degeneracy},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out{false, ""};
    try {
      out = c.body();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool in_time = c.time_limit_s <= 0.0 || secs < c.time_limit_s;
    bool pass = out.pass && in_time;
    failures += !pass;
    std::string timing;
    if (c.time_limit_s > 0.0) {
      char buf[48];
      std::snprintf(buf, sizeof buf, in_time ? " (limit %gs)" : " (over the %gs limit)", c.time_limit_s);
      timing = buf;
    }
    std::printf("%s  [PRIMARY] %-26s %.3fs%s  %s\n", pass ? "PASS" : "FAIL", c.name, secs, timing.c_str(),
                out.detail.c_str());
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures;
}
