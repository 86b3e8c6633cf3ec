#include "wwlab/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "wwlab/params.hpp"
#include "wwlab/quadrature.hpp"

namespace ww {

using constants::pi;

cplx kernel_sharp(double omega_max, double tau)
{
  if (!(omega_max > 0)) throw Error(ErrorKind::InvalidArgument, "sharp cutoff needs omega_max > 0");
  const double x = omega_max * tau;
  const double o4 = omega_max * omega_max * omega_max * omega_max;
  if (std::abs(x) < 2.0) {
    // Omega^4 sum_n (-i x)^n / (n! (n + 4))
    cplx term = 1.0, sum = 0.0;
    const cplx step(0.0, -x);
    for (int n = 0; n < 80; ++n) {
      sum += term / double(n + 4);
      term *= step / double(n + 1);
      if (std::abs(term) < 1e-18) break;
    }
    return o4 * sum;
  }
  const cplx a(0.0, -tau);
  const cplx a2 = a * a;
  const cplx a4 = a2 * a2;
  const double om = omega_max;
  const cplx poly = om * om * om / a - 3.0 * om * om / a2 + 6.0 * om / (a2 * a) - 6.0 / a4;
  return std::polar(1.0, -x) * poly + 6.0 / a4;
}

namespace {

double frequency_scale(const CutoffSpec& spec)
{
  switch (kind_of(spec)) {
  case CutoffKind::Exponential: return 1.0 / std::get<ExponentialCutoff>(spec).eps;
  case CutoffKind::ApShape: return 1.0 / std::get<ApShapeCutoff>(spec).eps;
  case CutoffKind::Sharp: return std::get<SharpCutoff>(spec).omega_max;
  case CutoffKind::None: break;
  }
  return 1.0;
}

constexpr std::size_t max_direct_panels = 4000;
constexpr std::size_t wynn_window = 24;

cplx accelerated(const std::vector<cplx>& partial, std::size_t end)
{
  const std::size_t begin = end > wynn_window ? end - wynn_window : 0;
  return wynn_epsilon(std::vector<cplx>(partial.begin() + begin, partial.begin() + end));
}

} // namespace

cplx kernel_quadrature(const CutoffSpec& spec, double tau, double tol)
{
  if (!is_integrable(spec))
    throw Error(ErrorKind::DivergentIntegral, "int_0^inf omega^3 d omega does not converge");
  if (!(tol > 0)) throw Error(ErrorKind::InvalidArgument, "tolerance must be positive");
  validate(spec);

  auto f = [&](double w) { return spectral_weight(spec, w) * std::polar(1.0, -w * tau); };
  const bool sharp = kind_of(spec) == CutoffKind::Sharp;
  const double upper = sharp ? std::get<SharpCutoff>(spec).omega_max : infinite_time;
  double h = frequency_scale(spec);
  if (tau != 0.0) h = std::min(h, pi / std::abs(tau));

  // pass 0: one G7K15 per half-period panel to fix the panel set and the magnitude
  std::vector<double> edges{0.0};
  std::vector<cplx> partial;
  cplx s = 0.0;
  bool accel = false;
  for (;;) {
    const double a = edges.back();
    const double b = std::min(a + h, upper);
    s += gauss_kronrod15(f, a, b).value;
    edges.push_back(b);
    partial.push_back(s);
    if (b >= upper) break;
    if (weight_tail(spec, b) <= 1e-3 * tol * std::abs(s)) break;
    if (partial.size() >= max_direct_panels) {
      accel = true;
      break;
    }
  }
  const cplx estimate = accel ? accelerated(partial, partial.size()) : s;
  const std::size_t n = partial.size();

  // pass 1: adaptive refinement of every panel against a share of the target
  const double panel_tol = 0.1 * tol * std::abs(estimate) / double(n);
  cplx sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    sum += integrate(f, edges[k], edges[k + 1], panel_tol, 1e-14).value;
    partial[k] = sum;
  }
  if (!accel) return sum;

  const cplx e1 = accelerated(partial, n);
  const cplx e2 = accelerated(partial, n - 2);
  if (std::abs(e1 - e2) > tol * std::abs(e1))
    throw Error(ErrorKind::ToleranceNotMet, "panel-sum extrapolation did not settle");
  return e1;
}

cplx kernel_value(const CutoffSpec& spec, double tau)
{
  switch (kind_of(spec)) {
  case CutoffKind::None:
    throw Error(ErrorKind::DivergentKernel, "no cutoff: the memory kernel is not finite");
  case CutoffKind::Exponential: return kernel_analytic(std::get<ExponentialCutoff>(spec).eps, tau);
  case CutoffKind::Sharp: return kernel_sharp(std::get<SharpCutoff>(spec).omega_max, tau);
  case CutoffKind::ApShape: return kernel_quadrature(spec, tau, 1e-12);
  }
  return 0.0;
}

double halfline_imag_exponential(double eps, double nu)
{
  if (!(eps > 0)) throw Error(ErrorKind::NonpositiveEps, "eps must be positive");
  const double x = eps * nu;
  return -(2.0 / (eps * eps * eps) + nu / (eps * eps) + nu * nu / eps) +
         nu * nu * nu * std::exp(-x) * std::expint(x);
}

double spectral_principal_value(const CutoffSpec& spec, double nu, double tol)
{
  if (!is_integrable(spec))
    throw Error(ErrorKind::DivergentIntegral, "principal value of omega^3/(nu - omega) diverges");
  if (!(nu > 0)) throw Error(ErrorKind::InvalidArgument, "nu must be positive");
  const double wnu = spectral_weight(spec, nu);
  auto sub = [&](double w) { return (spectral_weight(spec, w) - wnu) / (nu - w); };
  auto plain = [&](double w) { return spectral_weight(spec, w) / (nu - w); };

  std::vector<double> pts{0.0, nu, 2.0 * nu};
  const bool sharp = kind_of(spec) == CutoffKind::Sharp;
  const double om = sharp ? std::get<SharpCutoff>(spec).omega_max : 0.0;
  if (sharp && om < 2.0 * nu && om != nu) pts.push_back(om);
  std::sort(pts.begin(), pts.end());

  // subtracting w(nu) leaves a regular integrand; P int_0^{2 nu} d omega/(nu - omega) = 0
  double pv = 0.0;
  for (std::size_t k = 0; k + 1 < pts.size(); ++k)
    pv += integrate(sub, pts[k], pts[k + 1], 1e-16, 1e-13).value;

  if (sharp) {
    if (om > 2.0 * nu) pv += integrate(plain, 2.0 * nu, om, 1e-16, 1e-13).value;
    return pv;
  }
  const double h = std::max(nu, frequency_scale(spec));
  double x = 2.0 * nu;
  for (int k = 0; k < 100000; ++k) {
    pv += integrate(plain, x, x + h, 1e-16, 1e-13).value;
    x += h;
    if (weight_tail(spec, x) / (x - nu) <= 1e-3 * tol * std::abs(pv)) return pv;
  }
  throw Error(ErrorKind::ToleranceNotMet, "principal-value tail did not converge");
}

namespace {

// eps^3 int_0^{t} K e^{i nu tau} d tau in u = tau/eps for the exponential cutoff
cplx scaled_exponential_halfline(double kappa, double u_upper, double tol)
{
  auto g = [kappa](double u) {
    cplx z(u, -1.0);
    z *= z;
    return 6.0 * std::polar(1.0, kappa * u) / (z * z);
  };
  const double half_period = pi / kappa;
  double x = 0.0;
  cplx s = 0.0;
  while (x < u_upper) {
    const double b = std::min(x + std::min(std::max(1.0, 0.5 * x), half_period), u_upper);
    s += integrate(g, x, b, 0.0, 1e-13).value;
    x = b;
    if (std::isinf(u_upper)) {
      const double tail = 2.0 / (x * x * x); // int_x^inf 6/u^4 du
      if (tail <= 1e-2 * tol * std::min(std::abs(s.real()), std::abs(s.imag()))) break;
      if (x > 1e10) throw Error(ErrorKind::ToleranceNotMet, "half-line tail bound not reached");
    }
  }
  return s;
}

cplx time_domain_halfline(const CutoffSpec& spec, double nu, double t_upper)
{
  const double ts = time_scale(spec);
  const double h = std::min(ts, pi / (nu + 1.0 / ts));
  auto g = [&](double t) { return kernel_value(spec, t) * std::polar(1.0, nu * t); };
  cplx s = 0.0;
  for (double x = 0.0; x < t_upper;) {
    const double b = std::min(x + h, t_upper);
    s += integrate(g, x, b, 0.0, 1e-12).value;
    x = b;
  }
  return s;
}

} // namespace

HalfLineIntegral halfline_integral(const CutoffSpec& spec, double nu, double t_upper,
                                   HalfLineMethod method, double tol)
{
  if (!is_integrable(spec))
    throw Error(ErrorKind::DivergentIntegral, "half-line kernel integral diverges without a cutoff");
  if (!(nu > 0)) throw Error(ErrorKind::InvalidArgument, "nu must be positive");
  if (!(t_upper > 0)) throw Error(ErrorKind::InvalidArgument, "t_upper must be positive");
  if (!(tol > 0)) throw Error(ErrorKind::InvalidArgument, "tolerance must be positive");
  validate(spec);

  HalfLineIntegral r;
  r.method = method;
  const auto* ex = std::get_if<ExponentialCutoff>(&spec);
  if (ex) r.leading_imag = -2.0 / (ex->eps * ex->eps * ex->eps);

  if (method == HalfLineMethod::Analytic) {
    if (!ex) throw Error(ErrorKind::UnsupportedCutoff, "analytic half-line integral needs the exponential cutoff");
    if (!std::isinf(t_upper))
      throw Error(ErrorKind::InvalidArgument, "analytic half-line integral is for t_upper = inf");
    r.real_part = pi * nu * nu * nu * std::exp(-nu * ex->eps);
    r.imag_part = halfline_imag_exponential(ex->eps, nu);
    return r;
  }

  if (ex) {
    const double e3 = ex->eps * ex->eps * ex->eps;
    const cplx s = scaled_exponential_halfline(nu * ex->eps, t_upper / ex->eps, tol);
    r.real_part = s.real() / e3;
    r.imag_part = s.imag() / e3;
    return r;
  }
  if (std::isinf(t_upper)) {
    // int_0^inf e^{i(nu - omega) tau} d tau = pi delta(nu - omega) + i P 1/(nu - omega)
    r.real_part = pi * spectral_weight(spec, nu);
    r.imag_part = spectral_principal_value(spec, nu, tol);
    return r;
  }
  const cplx s = time_domain_halfline(spec, nu, t_upper);
  r.real_part = s.real();
  r.imag_part = s.imag();
  return r;
}

} // namespace ww
