#include "wwlab/markov.hpp"

#include <cmath>

#include <Eigen/QR>

#include "wwlab/kernel.hpp"

namespace ww {

MarkovSummary markov_summary(const AtomFieldParams& p, double star_threshold)
{
  validate(p);
  MarkovSummary s;
  const auto* ex = std::get_if<ExponentialCutoff>(&p.cutoff);
  if (ex) {
    const HalfLineIntegral exact = halfline_integral(p.cutoff, p.nu, infinite_time, HalfLineMethod::Analytic);
    const HalfLineIntegral quad = halfline_integral(p.cutoff, p.nu, infinite_time, HalfLineMethod::Quadrature);
    s.a = -p.D * exact.real_part;
    s.b = -p.D * quad.imag_part;
    s.shift_leading = -p.D * exact.leading_imag;
  } else {
    const HalfLineIntegral quad = halfline_integral(p.cutoff, p.nu);
    s.a = -p.D * quad.real_part;
    s.b = -p.D * quad.imag_part;
  }
  s.gamma_eff = -2.0 * s.a;
  s.shift = s.b;
  s.rate_ratio = std::abs(s.a) / p.nu;
  s.lamb_ratio = std::abs(s.b) / p.nu;
  s.star_ok = s.rate_ratio < star_threshold && s.lamb_ratio < star_threshold;
  return s;
}

MarkovSummary self_consistent_pole(const AtomFieldParams& p)
{
  validate(p);
  const auto* ex = std::get_if<ExponentialCutoff>(&p.cutoff);
  auto pv = [&](double x) {
    return ex ? halfline_imag_exponential(ex->eps, x) : spectral_principal_value(p.cutoff, x);
  };
  double b = -p.D * pv(p.nu);
  for (int it = 0; it < 200; ++it) {
    const double x = p.nu - b;
    if (!(x > 0)) throw Error(ErrorKind::InvalidArgument, "shift pulls the line below zero frequency");
    const double next = -p.D * pv(x);
    const bool done = std::abs(next - b) <= 1e-15 * std::abs(next);
    b = next;
    if (done) break;
  }
  MarkovSummary s = markov_summary(p);
  s.b = s.shift = b;
  s.a = -p.D * constants::pi * spectral_weight(p.cutoff, p.nu - b);
  s.gamma_eff = -2.0 * s.a;
  s.rate_ratio = std::abs(s.a) / p.nu;
  s.lamb_ratio = std::abs(s.b) / p.nu;
  return s;
}

FitResult fit_exponential(const AmplitudeTrace& trace, double t0, double t1)
{
  if (!(t1 > t0)) throw Error(ErrorKind::WindowTooSmall, "empty fit window");
  const double slack = 1e-9 * std::max(1.0, std::abs(t1));
  if (trace.size() == 0 || t0 < trace.times(0) - slack || t1 > trace.times(trace.size() - 1) + slack)
    throw Error(ErrorKind::WindowTooSmall, "fit window extends beyond the trace");
  Eigen::Index i0 = 0;
  while (i0 < trace.size() && trace.times(i0) < t0 - slack) ++i0;
  Eigen::Index i1 = i0;
  while (i1 < trace.size() && trace.times(i1) <= t1 + slack) ++i1;
  const Eigen::Index n = i1 - i0;
  if (n < 50) throw Error(ErrorKind::WindowTooSmall, "fewer than 50 samples in the fit window");

  Eigen::MatrixXd X(n, 2);
  Eigen::VectorXd logp(n), phase(n);
  double prev = 0.0, offset = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto c = trace.c_e(i0 + k);
    const double pop = std::norm(c);
    if (!(pop >= 1e-280)) throw Error(ErrorKind::AmplitudeUnderflow, "|c_e|^2 underflows in the fit window");
    X(k, 0) = 1.0;
    X(k, 1) = trace.times(i0 + k);
    logp(k) = std::log(pop);
    // nearest-branch continuation
    const double raw = std::arg(c);
    if (k > 0) {
      const double jump = raw + offset - prev;
      if (jump > constants::pi) offset -= 2.0 * constants::pi * std::round(jump / (2.0 * constants::pi));
      else if (jump < -constants::pi) offset += 2.0 * constants::pi * std::round(-jump / (2.0 * constants::pi));
    }
    phase(k) = raw + offset;
    prev = phase(k);
  }
  const auto qr = X.colPivHouseholderQr();
  const Eigen::Vector2d lp = qr.solve(logp);
  const Eigen::Vector2d ph = qr.solve(phase);
  FitResult r;
  r.gamma_fit = -lp(1);
  r.shift_fit = ph(1);
  r.window_start = trace.times(i0);
  r.window_end = trace.times(i1 - 1);
  r.residual_rms = std::sqrt((X * lp - logp).squaredNorm() / double(n));
  r.samples = n;
  return r;
}

FitResult fit_exponential(const AmplitudeTrace& trace, const AtomFieldParams& p)
{
  const MarkovSummary s = markov_summary(p);
  return fit_exponential(trace, 10.0 * time_scale(p.cutoff), 1.0 / s.gamma_eff);
}

namespace {

double crossover_gamma(const AtomFieldParams& p)
{
  const auto* ex = std::get_if<ExponentialCutoff>(&p.cutoff);
  if (!ex) throw Error(ErrorKind::UnsupportedCutoff, "crossover estimate needs the exponential cutoff");
  validate(p);
  return gamma(p) * std::exp(-p.nu * ex->eps);
}

} // namespace

double crossover_residual(const AtomFieldParams& p, double t)
{
  const double g = crossover_gamma(p);
  const double eps = std::get<ExponentialCutoff>(p.cutoff).eps;
  return -0.5 * g * t + 4.0 * std::log(t / eps);
}

double crossover_estimate(const AtomFieldParams& p)
{
  const double g = crossover_gamma(p);
  if (!(g > 0)) throw Error(ErrorKind::NoBracket, "Gamma_eff = 0: the exponential never decays");
  // the residual peaks at t = 8/Gamma_eff and decreases beyond it
  double lo = 8.0 / g, hi = 1e4 / g;
  if (!(crossover_residual(p, lo) > 0 && crossover_residual(p, hi) < 0)) throw Error(ErrorKind::NoBracket, "crossover bracket does not straddle the root");
  for (int it = 0; it < 200 && hi - lo > 4e-16 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (crossover_residual(p, mid) > 0) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

} // namespace ww
