#include "hybrid_radiance/kernels.hpp"

#include <cmath>
#include <limits>
#include <algorithm>
#include <numbers>
#include <sstream>

#include "hybrid_radiance/errors.hpp"

namespace hr {
namespace {

// Below this distance the closed forms lose digits to cancellation between the
// 1/kappa^n terms (~eps/kappa^5 for the second derivative); the power series is
// summed instead. At kappa = 1 both branches agree to ~1e-15.
constexpr double kSeriesCutoff = 1.0;
constexpr int kSeriesTerms = 12;  // last term ~ 1/25! for kappa < 1

// F(k) = sum_n c_n k^{2n}, c_n = f (-1)^n/(2n+1)! + g (-1)^{n+1} (2n+2)/(2n+3)!.
// Returns F (order 0) or F'' (order 2).
double f_series(double k, const AngularCoefficients& a, int order) {
  const double k2 = k * k;
  double fact = 1.0;  // (2n+1)!
  double sign = 1.0;
  double power = 1.0;  // k^{2n - order}
  double sum = 0.0;
  for (int n = 0; n < kSeriesTerms; ++n) {
    if (n > 0) fact *= (2.0 * n) * (2.0 * n + 1.0);
    const double c = sign * (a.f / fact - a.g / (fact * (2.0 * n + 3.0)));
    if (order == 0) {
      sum += c * power;
      power *= k2;
    } else if (n > 0) {
      sum += c * (2.0 * n) * (2.0 * n - 1.0) * power;
      power *= k2;
    }
    sign = -sign;
  }
  return sum;
}

void require_positive(double kappa) {
  if (!(kappa > 0.0) || !std::isfinite(kappa))
    throw DomainError("reduced distance must be finite and positive, got " + std::to_string(kappa));
}

// F(k) = f sin k / k + g (cos k / k^2 - sin k / k^3)
double f_shape(double k, const AngularCoefficients& a) {
  if (k < kSeriesCutoff) return f_series(k, a, 0);
  const double s = std::sin(k), c = std::cos(k);
  return a.f * s / k + a.g * (c / (k * k) - s / (k * k * k));
}

// G(k) = f cos k / k - g (sin k / k^2 + cos k / k^3)
double g_shape(double k, const AngularCoefficients& a) {
  const double s = std::sin(k), c = std::cos(k);
  return a.f * c / k - a.g * (s / (k * k) + c / (k * k * k));
}

double f_shape_dd(double k, const AngularCoefficients& a) {
  if (k < kSeriesCutoff) return f_series(k, a, 2);
  const double s = std::sin(k), c = std::cos(k);
  const double k2 = k * k, k3 = k2 * k, k4 = k2 * k2, k5 = k4 * k;
  return a.f * (-(k2 - 2.0) / k3 * s - 2.0 / k2 * c) +
         a.g * ((5.0 * k2 - 12.0) / k5 * s - (k2 - 12.0) / k4 * c);
}

double g_shape_dd(double k, const AngularCoefficients& a) {
  const double s = std::sin(k), c = std::cos(k);
  const double k2 = k * k, k3 = k2 * k, k4 = k2 * k2, k5 = k4 * k;
  return a.f * (2.0 / k2 * s - (k2 - 2.0) / k3 * c) +
         a.g * ((k2 - 12.0) / k4 * s + (5.0 * k2 - 12.0) / k5 * c);
}

}  // namespace

AngularCoefficients angular_coefficients(double phi) {
  if (!(phi >= 0.0 && phi <= std::numbers::pi))
    throw DomainError("dipole angle must lie in [0, pi], got " + std::to_string(phi));
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  return {s * s, 1.0 - 3.0 * c * c};
}

double gamma_kernel(double kappa, double phi) {
  require_positive(kappa);
  return 1.5 * GeometryConfig::gamma * f_shape(kappa, angular_coefficients(phi));
}

double v_kernel(double kappa, double phi) {
  require_positive(kappa);
  return 0.75 * GeometryConfig::gamma * g_shape(kappa, angular_coefficients(phi));
}

double kernel_second_derivative(double kappa, double phi, KernelKind which) {
  require_positive(kappa);
  const auto a = angular_coefficients(phi);
  if (which == KernelKind::gamma) return 1.5 * GeometryConfig::gamma * f_shape_dd(kappa, a);
  return 0.75 * GeometryConfig::gamma * g_shape_dd(kappa, a);
}

std::complex<double> m_kernel(double kappa, double phi) {
  return {v_kernel(kappa, phi), -0.5 * gamma_kernel(kappa, phi)};
}

std::complex<double> m_kernel_second_derivative(double kappa, double phi) {
  return {kernel_second_derivative(kappa, phi, KernelKind::v),
          -0.5 * kernel_second_derivative(kappa, phi, KernelKind::gamma)};
}

KernelMatrices build_matrices(const GeometryConfig& geom) {
  validate(geom);
  const int n = geom.n_atoms;
  KernelMatrices km;
  km.geom = geom;
  km.gamma_mat = Eigen::MatrixXd::Zero(n, n);
  km.v_mat = Eigen::MatrixXd::Zero(n, n);
  km.gamma_dd = Eigen::MatrixXd::Zero(n, n);
  km.v_dd = Eigen::MatrixXd::Zero(n, n);

  // Toeplitz: every entry depends on |j - j'| only.
  for (int sep = 1; sep < n; ++sep) {
    const double kappa = reduced_distance(geom, 0, sep);
    const double g = gamma_kernel(kappa, geom.phi);
    const double v = v_kernel(kappa, geom.phi);
    const double gdd = kernel_second_derivative(kappa, geom.phi, KernelKind::gamma);
    const double vdd = kernel_second_derivative(kappa, geom.phi, KernelKind::v);
    for (int j = 0; j + sep < n; ++j) {
      const int jp = j + sep;
      km.gamma_mat(j, jp) = km.gamma_mat(jp, j) = g;
      km.v_mat(j, jp) = km.v_mat(jp, j) = v;
      km.gamma_dd(j, jp) = km.gamma_dd(jp, j) = gdd;
      km.v_dd(j, jp) = km.v_dd(jp, j) = vdd;
    }
  }
  km.gamma_mat.diagonal().setConstant(GeometryConfig::gamma);

  const std::complex<double> i{0.0, 1.0};
  km.m_mat = km.v_mat.cast<std::complex<double>>() - 0.5 * i * km.gamma_mat.cast<std::complex<double>>();
  km.m_dd = km.v_dd.cast<std::complex<double>>() - 0.5 * i * km.gamma_dd.cast<std::complex<double>>();
  return km;
}

MagicDistance find_kappa0(double phi, double search_lo, double search_hi) {
  const auto a = angular_coefficients(phi);
  auto fdd = [&](double k) { return 1.5 * GeometryConfig::gamma * f_shape_dd(k, a); };

  constexpr double step = 0.01;
  constexpr double tol = 1e-12;
  if (!(search_lo > 0.0 && search_hi > search_lo)) throw DomainError("invalid kappa0 search window");
  double lo = search_lo;
  double f_lo = fdd(lo);
  const int n_steps = static_cast<int>(std::ceil((search_hi - search_lo) / step - 1e-9));
  for (int s = 1; s <= n_steps; ++s) {
    const double hi = std::min(search_lo + s * step, search_hi);
    const double f_hi = fdd(hi);
    if (f_hi == 0.0) return {hi, hi / (2.0 * std::numbers::pi)};
    if ((f_lo < 0.0) != (f_hi < 0.0)) {
      double a_lo = lo, a_hi = hi, fa = f_lo;
      double mid = 0.5 * (a_lo + a_hi);
      for (int it = 0; it < 200; ++it) {
        mid = 0.5 * (a_lo + a_hi);
        const double fm = fdd(mid);
        if (std::abs(fm) < tol || a_hi - a_lo <= 4.0 * std::numeric_limits<double>::epsilon() * mid) break;
        if ((fm < 0.0) == (fa < 0.0)) {
          a_lo = mid;
          fa = fm;
        } else {
          a_hi = mid;
        }
      }
      return {mid, mid / (2.0 * std::numbers::pi)};
    }
    lo = hi;
    f_lo = f_hi;
  }
  std::ostringstream msg;
  msg << "Gamma'' has no sign change for phi = " << phi << " in the scanned bracket (" << search_lo
      << ", " << search_hi << "]";
  throw RootNotFoundError(msg.str(), search_lo, search_hi);
}

}  // namespace hr
