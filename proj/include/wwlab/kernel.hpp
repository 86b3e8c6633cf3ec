#pragma once

#include <complex>
#include <limits>

#include "wwlab/cutoff.hpp"

namespace ww {

using cplx = std::complex<double>;

// 6/(tau - i eps)^4, the D-stripped kernel of the exponential cutoff.
template <typename Scalar>
std::complex<Scalar> kernel_analytic(Scalar eps, Scalar tau)
{
  if (!(eps > Scalar(0))) throw Error(ErrorKind::NonpositiveEps, "kernel pole on the real axis (eps <= 0)");
  const std::complex<Scalar> z(tau, -eps);
  const std::complex<Scalar> z2 = z * z;
  return Scalar(6) / (z2 * z2);
}

// int_0^Omega w^3 e^{-i w tau} dw from the exact antiderivative, power series for |Omega tau| < 2.
cplx kernel_sharp(double omega_max, double tau);

// int_0^inf w(omega) e^{-i omega tau} d omega by half-period Gauss-Kronrod panels.
cplx kernel_quadrature(const CutoffSpec& spec, double tau, double tol = 1e-10);

// Kernel used by the time-domain solver. DivergentKernel for NoCutoff.
cplx kernel_value(const CutoffSpec& spec, double tau);

enum class HalfLineMethod { Analytic, Quadrature };

struct HalfLineIntegral {
  double real_part = 0.0;
  double imag_part = 0.0;
  HalfLineMethod method = HalfLineMethod::Quadrature;
  double leading_imag = 0.0; // -2/eps^3 for the exponential cutoff, 0 otherwise
};

inline constexpr double infinite_time = std::numeric_limits<double>::infinity();

// int_0^{t_upper} K(tau) e^{i nu tau} d tau.
HalfLineIntegral halfline_integral(const CutoffSpec& spec, double nu, double t_upper = infinite_time,
                                   HalfLineMethod method = HalfLineMethod::Quadrature,
                                   double tol = 1e-10);

// Closed form of the imaginary part at t_upper = inf, exponential cutoff:
// -(2/eps^3 + nu/eps^2 + nu^2/eps) + nu^3 e^{-eps nu} Ei(eps nu).
double halfline_imag_exponential(double eps, double nu);

// Principal value P int_0^inf w(omega)/(nu - omega) d omega.
double spectral_principal_value(const CutoffSpec& spec, double nu, double tol = 1e-10);

} // namespace ww
