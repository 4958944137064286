#pragma once

#include <complex>
#include <span>
#include <vector>

#include "hybrid_radiance/geometry.hpp"

namespace hr {

enum class LatticeSumKind { m, m_dd };

/// `raw` truncates at the last shell; `accelerated` adds a summation-by-parts
/// estimate of the oscillating tail computed from the kernel envelope.
enum class SumMethod { accelerated, raw };

inline constexpr int kMinShells = 10;
inline constexpr int kDefaultShells = 100000;
inline constexpr int kDefaultBandPoints = 801;

struct LatticeSum {
  std::complex<double> value;
  double tail_estimate;  // bound on the remaining truncation error; +inf on the light line
  int shells;
};

/// Infinite-chain Fourier sum at quasimomentum q (in units of k0 = 2 pi / lambda0).
///   m:    M(0) + 2 sum_{n>=1} cos(q n k0 d) M(n k0 d),  M(0) = -i gamma / 2
///   m_dd: 2 sum_{n>=1} cos(q n k0 d) M''(n k0 d)
LatticeSum lattice_sum(double q, const GeometryConfig& geom, LatticeSumKind which, int shells,
                       SumMethod method = SumMethod::accelerated);

struct BandPoint {
  double q;                 // units of k0
  double q_d_over_pi;       // q d / pi, zone edges at +-1
  std::complex<double> m_q;
  std::complex<double> m_dd_q;
  std::complex<double> e_q; // m_q + eta0^2 m_dd_q
  double rate;              // -2 Im(e_q)
  double rate_eta0_zero;    // -2 Im(m_q)
  double delta_rate;        // rate - rate_eta0_zero
  int shells;
  double tail_estimate;     // m tail + eta0^2 * m_dd tail
};

/// Separable-branch band E_q over the given quasimomenta (units of k0).
std::vector<BandPoint> band_scan(const GeometryConfig& geom, std::span<const double> q_grid, int shells,
                                 SumMethod method = SumMethod::accelerated);

/// `points` uniformly spaced quasimomenta covering [-pi/d, pi/d] in units of k0.
std::vector<double> brillouin_grid(double spacing, int points = kDefaultBandPoints);

}  // namespace hr
