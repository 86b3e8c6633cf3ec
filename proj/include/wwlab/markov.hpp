#pragma once

#include "wwlab/params.hpp"
#include "wwlab/volterra.hpp"

namespace ww {

struct MarkovSummary {
  double a = 0.0; // real part of the pole constant
  double b = 0.0; // imaginary part (frequency shift)
  double gamma_eff = 0.0;
  double shift = 0.0;
  double shift_leading = 0.0; // 2D/eps^3 for the exponential cutoff
  double rate_ratio = 0.0;    // |a|/nu
  double lamb_ratio = 0.0;    // |b|/nu
  bool star_ok = false;
};

// a + i b = -D * halfline_integral(cutoff, nu, inf).
MarkovSummary markov_summary(const AtomFieldParams& p, double star_threshold = 0.1);

// Pole of s + M~(s) = 0 evaluated with the spectral weight at the pulled frequency nu - b,
// iterated to self-consistency. Not part of the first-order Markov result.
MarkovSummary self_consistent_pole(const AtomFieldParams& p);

struct FitResult {
  double gamma_fit = 0.0;
  double shift_fit = 0.0;
  double window_start = 0.0;
  double window_end = 0.0;
  double residual_rms = 0.0;
  Eigen::Index samples = 0;
};

// Least squares on log|c|^2 and on the unwrapped phase over [t0, t1].
FitResult fit_exponential(const AmplitudeTrace& trace, double t0, double t1);

// Default window [10 eps, 1/Gamma_eff].
FitResult fit_exponential(const AmplitudeTrace& trace, const AtomFieldParams& p);

// Root of e^{-Gamma_eff t/2}/eps^4 = 1/t^4 on [8/Gamma_eff, 1e4/Gamma_eff].
double crossover_estimate(const AtomFieldParams& p);

// log(e^{-Gamma_eff t/2} t^4 / eps^4)
double crossover_residual(const AtomFieldParams& p, double t);

} // namespace ww
