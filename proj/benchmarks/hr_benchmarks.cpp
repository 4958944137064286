#include <numbers>

#include <benchmark/benchmark.h>

#include "hybrid_radiance/band.hpp"
#include "hybrid_radiance/entanglement.hpp"
#include "hybrid_radiance/heff.hpp"
#include "hybrid_radiance/kernels.hpp"
#include "hybrid_radiance/lindblad.hpp"
#include "hybrid_radiance/spectra.hpp"

namespace {

hr::GeometryConfig chain(int n, int nph, double eta) {
  hr::GeometryConfig g;
  g.n_atoms = n;
  g.n_phonons = nph;
  g.spacing = 0.2;
  g.eta0 = eta;
  return g;
}

void BM_KernelSecondDerivative(benchmark::State& state) {
  double k = 0.3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(hr::kernel_second_derivative(k, 1.1, hr::KernelKind::gamma));
    k = k > 20.0 ? 0.3 : k + 1e-3;
  }
}
BENCHMARK(BM_KernelSecondDerivative);

void BM_FindKappa0(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(hr::find_kappa0(std::numbers::pi / 2));
}
BENCHMARK(BM_FindKappa0);

void BM_BuildHeff(benchmark::State& state) {
  auto g = chain(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)), 0.3);
  auto k = hr::build_matrices(g);
  hr::HybridBasis b(g);
  for (auto _ : state) benchmark::DoNotOptimize(hr::build_heff(g, k, b));
  state.counters["dim"] = static_cast<double>(b.size());
}
BENCHMARK(BM_BuildHeff)->Args({5, 2})->Args({8, 1})->Args({6, 3});

void BM_SpectrumWithEntropy(benchmark::State& state) {
  auto g = chain(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)), 0.3);
  hr::HybridBasis b(g);
  auto h = hr::build_heff(g, hr::build_matrices(g), b);
  for (auto _ : state) {
    auto modes = hr::eigendecompose(h);
    double s = 0.0;
    for (const auto& m : modes) s += hr::von_neumann_entropy(hr::reduce_spin(m.eigenvector, b));
    benchmark::DoNotOptimize(s);
  }
  state.counters["dim"] = static_cast<double>(b.size());
}
BENCHMARK(BM_SpectrumWithEntropy)->Args({5, 2})->Args({8, 1})->Unit(benchmark::kMillisecond);

void BM_BandScan(benchmark::State& state) {
  auto g = chain(1, 0, 0.3);
  auto grid = hr::brillouin_grid(g.spacing, 101);
  const int shells = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(hr::band_scan(g, grid, shells));
}
BENCHMARK(BM_BandScan)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_MasterRhs(benchmark::State& state) {
  auto g = chain(static_cast<int>(state.range(0)), 0, 0.2);
  hr::TruncatedSpace space(g.n_atoms, static_cast<int>(state.range(1)));
  auto f = hr::build_jump_family(g, hr::build_matrices(g), space);
  Eigen::VectorXcd amp = Eigen::VectorXcd::Ones(g.n_atoms);
  auto rho = hr::single_excitation_state(space, amp, std::vector<int>(static_cast<std::size_t>(g.n_atoms), 0));
  for (auto _ : state) benchmark::DoNotOptimize(hr::master_rhs(rho, f));
  state.counters["dim"] = static_cast<double>(space.dim());
}
BENCHMARK(BM_MasterRhs)->Args({2, 2})->Args({3, 1})->Args({3, 2})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
