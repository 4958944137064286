#pragma once

#include <complex>

#include <Eigen/Dense>

#include "hybrid_radiance/geometry.hpp"

namespace hr {

struct AngularCoefficients {
  double f;  // sin^2(phi)
  double g;  // 1 - 3 cos^2(phi)
};

AngularCoefficients angular_coefficients(double phi);

/// Collective decay kernel Gamma(kappa) in units of gamma; kappa > 0.
double gamma_kernel(double kappa, double phi);

/// Dipole-dipole exchange kernel V(kappa) in units of gamma; kappa > 0.
double v_kernel(double kappa, double phi);

enum class KernelKind { gamma, v };

/// Closed-form d^2/dkappa^2 of the Gamma or V kernel.
double kernel_second_derivative(double kappa, double phi, KernelKind which);

/// Complex kernel M = V - i Gamma / 2 and its second derivative.
std::complex<double> m_kernel(double kappa, double phi);
std::complex<double> m_kernel_second_derivative(double kappa, double phi);

/// N x N coupling blocks for a chain. Diagonals follow the convention
/// Gamma_jj = gamma, V_jj = 0 and Gamma''_jj = V''_jj = 0.
struct KernelMatrices {
  GeometryConfig geom;
  Eigen::MatrixXd gamma_mat;
  Eigen::MatrixXd v_mat;
  Eigen::MatrixXd gamma_dd;
  Eigen::MatrixXd v_dd;
  Eigen::MatrixXcd m_mat;  // V - i Gamma / 2
  Eigen::MatrixXcd m_dd;   // V'' - i Gamma'' / 2
};

KernelMatrices build_matrices(const GeometryConfig& geom);

struct MagicDistance {
  double kappa0;
  double d0_over_lambda;
};

inline constexpr double kKappa0SearchLo = 0.5;
inline constexpr double kKappa0SearchHi = 12.0;

/// Smallest zero of Gamma''(kappa, phi) in (lo, hi], refined by bisection to
/// |Gamma''| < 1e-12. Throws RootNotFoundError when Gamma'' has no sign change
/// in the window.
MagicDistance find_kappa0(double phi, double lo = kKappa0SearchLo, double hi = kKappa0SearchHi);

}  // namespace hr
