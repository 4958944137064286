#include "hybrid_radiance/band.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "hybrid_radiance/errors.hpp"
#include "hybrid_radiance/kernels.hpp"

namespace hr {
namespace {

using cd = std::complex<double>;

// Neumaier-compensated complex accumulator.
class CompensatedSum {
 public:
  void add(cd x) {
    add_part(x.real(), re_, re_c_);
    add_part(x.imag(), im_, im_c_);
    abs_ += std::abs(x);
  }
  cd value() const { return {re_ + re_c_, im_ + im_c_}; }
  double magnitude() const { return abs_; }

 private:
  static void add_part(double x, double& sum, double& comp) {
    const double t = sum + x;
    comp += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  double re_ = 0.0, re_c_ = 0.0, im_ = 0.0, im_c_ = 0.0, abs_ = 0.0;
};

// Kernel values on the lattice shells 1..shells+3 for one kernel kind. The
// three extra shells feed the tail's finite differences.
class ShellTable {
 public:
  ShellTable(const GeometryConfig& geom, LatticeSumKind kind, int shells)
      : kappa1_(2.0 * std::numbers::pi * geom.spacing), shells_(shells) {
    values_.resize(static_cast<std::size_t>(shells) + 3);
    for (int n = 1; n <= shells + 3; ++n) {
      const double kappa = kappa1_ * n;
      values_[static_cast<std::size_t>(n - 1)] =
          kind == LatticeSumKind::m ? m_kernel(kappa, geom.phi) : m_kernel_second_derivative(kappa, geom.phi);
    }
  }

  double kappa1() const { return kappa1_; }
  int shells() const { return shells_; }
  cd at(int n) const { return values_[static_cast<std::size_t>(n - 1)]; }
  // Smooth envelope h(n) = M(n kappa1) e^{i n kappa1}.
  cd envelope(int n) const { return at(n) * std::polar(1.0, kappa1_ * n); }

 private:
  double kappa1_;
  int shells_;
  std::vector<cd> values_;
};

struct HalfSum {
  cd value;
  double tail_estimate;
};

// sum_{n>=1} cos(q kappa1 n) M_n  =  1/2 sum_{+-} sum_n z_+-^n h(n),  z_+- = e^{i(+-q-1) kappa1}.
HalfSum one_sided_sum(const ShellTable& t, double q, SumMethod method) {
  const int big_n = t.shells();
  const double phase = q * t.kappa1();
  CompensatedSum acc;
  for (int n = 1; n <= big_n; ++n) acc.add(std::cos(phase * n) * t.at(n));

  cd tail{0.0, 0.0};
  double estimate = 0.0;
  const cd h1 = t.envelope(big_n + 1);
  const cd h2 = t.envelope(big_n + 2);
  const cd h3 = t.envelope(big_n + 3);
  const cd d1 = h2 - h1;
  const cd d2 = h3 - 2.0 * h2 + h1;
  for (double sign : {1.0, -1.0}) {
    const double theta = sign * phase - t.kappa1();
    const cd one_minus_z = 1.0 - std::polar(1.0, theta);
    if (big_n * std::abs(one_minus_z) < 10.0) {
      // Light-line branch: the partial sums of h(n) do not settle.
      estimate = std::numeric_limits<double>::infinity();
      continue;
    }
    // sum_{n>N} z^n h_n = z^{N+1} h_{N+1}/(1-z) + z^{N+2} dh/(1-z)^2 + z^{N+3} d2h/(1-z)^3 + ...
    const cd t1 = std::polar(1.0, theta * (big_n + 1)) * h1 / one_minus_z;
    const cd t2 = std::polar(1.0, theta * (big_n + 2)) * d1 / (one_minus_z * one_minus_z);
    const cd t3 = std::polar(1.0, theta * (big_n + 3)) * d2 / (one_minus_z * one_minus_z * one_minus_z);
    if (method == SumMethod::accelerated) {
      tail += 0.5 * (t1 + t2 + t3);
      estimate += 0.5 * std::abs(t3);
    } else {
      estimate += 0.5 * (std::abs(t1) + std::abs(t2));
    }
  }
  estimate += 8.0 * std::numeric_limits<double>::epsilon() * acc.magnitude();
  return {acc.value() + tail, estimate};
}

void check_shells(int shells) {
  if (shells < kMinShells)
    throw DomainError("lattice sums need at least " + std::to_string(kMinShells) + " shells, got " +
                      std::to_string(shells));
}

}  // namespace

LatticeSum lattice_sum(double q, const GeometryConfig& geom, LatticeSumKind which, int shells, SumMethod method) {
  check_shells(shells);
  validate(geom);
  const ShellTable table(geom, which, shells);
  const HalfSum half = one_sided_sum(table, q, method);
  cd value = 2.0 * half.value;
  if (which == LatticeSumKind::m) value += cd{0.0, -0.5 * GeometryConfig::gamma};
  return {value, 2.0 * half.tail_estimate, shells};
}

std::vector<BandPoint> band_scan(const GeometryConfig& geom, std::span<const double> q_grid, int shells,
                                 SumMethod method) {
  check_shells(shells);
  validate(geom);
  const ShellTable m_table(geom, LatticeSumKind::m, shells);
  const ShellTable dd_table(geom, LatticeSumKind::m_dd, shells);
  const double eta2 = geom.eta0 * geom.eta0;

  std::vector<BandPoint> out;
  out.reserve(q_grid.size());
  for (double q : q_grid) {
    const HalfSum hm = one_sided_sum(m_table, q, method);
    const HalfSum hdd = one_sided_sum(dd_table, q, method);
    BandPoint p;
    p.q = q;
    p.q_d_over_pi = 2.0 * q * geom.spacing;
    p.m_q = 2.0 * hm.value + cd{0.0, -0.5 * GeometryConfig::gamma};
    p.m_dd_q = 2.0 * hdd.value;
    p.e_q = p.m_q + eta2 * p.m_dd_q;
    p.rate = -2.0 * p.e_q.imag();
    p.rate_eta0_zero = -2.0 * p.m_q.imag();
    p.delta_rate = p.rate - p.rate_eta0_zero;
    p.shells = shells;
    p.tail_estimate = 2.0 * hm.tail_estimate + eta2 * 2.0 * hdd.tail_estimate;
    out.push_back(p);
  }
  return out;
}

std::vector<double> brillouin_grid(double spacing, int points) {
  if (!(spacing > 0.0)) throw DomainError("spacing must be positive");
  if (points < 2) throw DomainError("a Brillouin-zone grid needs at least two points");
  // q d / pi runs over [-1, 1]; q in units of k0 is (q d / pi) / (2 spacing).
  std::vector<double> grid(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    const double qd_over_pi = -1.0 + 2.0 * i / (points - 1);
    grid[static_cast<std::size_t>(i)] = qd_over_pi / (2.0 * spacing);
  }
  return grid;
}

}  // namespace hr
