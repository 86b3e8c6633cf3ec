#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "wwlab/kernel.hpp"
#include "wwlab/markov.hpp"
#include "wwlab/modes.hpp"

using namespace ww;

namespace {

const AtomFieldParams scaled = hydrogen_scaled_preset();

AmplitudeTrace synthetic(std::complex<double> lambda, double dt, int n)
{
  AmplitudeTrace t;
  t.times.resize(n);
  t.c_e.resize(n);
  t.norm_sq.resize(n);
  for (int i = 0; i < n; ++i) {
    t.times(i) = i * dt;
    t.c_e(i) = std::exp(lambda * t.times(i));
    t.norm_sq(i) = std::norm(t.c_e(i));
  }
  return t;
}

ErrorKind failure(auto&& f)
{
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::InvalidArgument;
}

} // namespace

TEST_CASE("pole constant in the scaled regime")
{
  const MarkovSummary m = markov_summary(scaled);
  const double G = gamma(scaled);
  CHECK(m.a < 0.0);
  CHECK(std::abs(m.a + 0.5 * G * std::exp(-0.3)) <= 1e-9 * G);
  CHECK(m.gamma_eff == doctest::Approx(4.6546e-3).epsilon(1e-4));
  CHECK(m.gamma_eff == -2.0 * m.a);
  CHECK(m.shift_leading == doctest::Approx(0.074074074).epsilon(1e-8));
  CHECK(m.shift == doctest::Approx(0.088742740887).epsilon(1e-9));
  CHECK(m.shift > 0.0);
  CHECK(m.rate_ratio == doctest::Approx(m.gamma_eff / 2.0).epsilon(1e-14));
  CHECK(m.lamb_ratio == doctest::Approx(m.shift).epsilon(1e-14));
  CHECK(m.star_ok);
}

TEST_CASE("shift grows without bound as eps shrinks")
{
  double prev = 0.0;
  for (double eps : {1.0, 0.3, 0.1, 0.03, 0.01}) {
    const MarkovSummary m = markov_summary(make_params(1.0, 1e-3, exponential_cutoff(eps)));
    CHECK(m.shift > prev);
    prev = m.shift;
  }
  CHECK(prev > 1000.0);
}

TEST_CASE("rate follows e^{-nu eps}")
{
  for (double eps : {0.1, 0.3, 1.0}) {
    const AtomFieldParams p = make_params(1.0, 1e-3, exponential_cutoff(eps));
    const double G = gamma(p);
    CHECK(markov_summary(p).gamma_eff / G == doctest::Approx(std::exp(-eps)).epsilon(1e-12));
    const double q = 2.0 * p.D * halfline_integral(p.cutoff, 1.0).real_part;
    CHECK(q / G == doctest::Approx(std::exp(-eps)).epsilon(1e-6));
  }
}

TEST_CASE("self-consistent pole")
{
  // b = -D P(nu - b), a = -D pi w(nu - b)
  const MarkovSummary s = self_consistent_pole(scaled);
  const double line = 1.0 - s.shift;
  CHECK(s.shift == doctest::Approx(-1e-3 * halfline_imag_exponential(0.3, line)).epsilon(1e-10));
  CHECK(s.gamma_eff == doctest::Approx(2e-3 * M_PI * spectral_weight(scaled.cutoff, line)).epsilon(1e-10));
  CHECK(s.gamma_eff / markov_summary(scaled).gamma_eff == doctest::Approx(0.7806).epsilon(1e-3));
}

TEST_CASE("fit recovers a synthetic exponential")
{
  const std::complex<double> lambda(-0.004, 0.37);
  const FitResult f = fit_exponential(synthetic(lambda, 0.05, 4000), 3.0, 150.0);
  CHECK(f.gamma_fit == doctest::Approx(0.008).epsilon(1e-12));
  CHECK(f.shift_fit == doctest::Approx(0.37).epsilon(1e-12));
  CHECK(f.residual_rms < 1e-12);
  CHECK(f.window_start >= 3.0);
  CHECK(f.window_end <= 150.0);
  CHECK(f.samples >= 50);

  const FitResult neg = fit_exponential(synthetic({-0.01, -2.5}, 0.05, 2000), 0.0, 99.0);
  CHECK(neg.shift_fit == doctest::Approx(-2.5).epsilon(1e-12));
}

TEST_CASE("fit errors")
{
  const AmplitudeTrace t = synthetic({-0.01, 0.1}, 0.1, 100);
  CHECK(failure([&] { fit_exponential(t, 0.0, 4.0); }) == ErrorKind::WindowTooSmall);
  CHECK(failure([&] { fit_exponential(t, 5.0, 20.0); }) == ErrorKind::WindowTooSmall);
  CHECK(failure([&] { fit_exponential(t, 2.0, 1.0); }) == ErrorKind::WindowTooSmall);
  const AmplitudeTrace dead = synthetic({-20.0, 0.0}, 0.5, 200);
  CHECK(failure([&] { fit_exponential(dead, 0.0, 99.0); }) == ErrorKind::AmplitudeUnderflow);
}

TEST_CASE("crossover estimate")
{
  const double t = crossover_estimate(scaled);
  CHECK(t == doctest::Approx(19002.378897085764).epsilon(1e-12));
  CHECK(std::abs(crossover_residual(scaled, t)) < 1e-10);

  AtomFieldParams strong = scaled;
  strong.D *= 10.0;
  const double ts = crossover_estimate(strong);
  CHECK(ts < t);
  CHECK(ts == doctest::Approx(1459.09).epsilon(1e-5));

  AtomFieldParams off = scaled;
  off.D = 0.0;
  CHECK(failure([&] { crossover_estimate(off); }) == ErrorKind::NoBracket);
  CHECK(failure([&] { crossover_estimate(make_params(1.0, 1e-3, sharp_cutoff(3.0))); }) == ErrorKind::UnsupportedCutoff);
}

TEST_CASE("deep-tail fit is slower than the pole rate")
{
  const MarkovSummary m = markov_summary(scaled);
  const double ts = crossover_estimate(scaled);
  const AmplitudeTrace t = solve(scaled, {0.03, 2.0 * ts, HistoryMode::Compressed, default_memory(scaled)});
  const FitResult f = fit_exponential(t, 1.2 * ts, 2.0 * ts);
  CHECK(f.gamma_fit < m.gamma_eff);
  CHECK(f.gamma_fit > 0.0);
}

TEST_CASE("consistency triangle")
{
  // rate ratio 2.3e-3 and lamb ratio 3.3e-3: inside (0.01, 0.1)
  const AtomFieldParams p = make_params(1.0, 1e-3, exponential_cutoff(1.0));
  const MarkovSummary m = markov_summary(p);
  REQUIRE(m.rate_ratio < 0.01);
  REQUIRE(m.lamb_ratio < 0.1);
  const double t_end = 1.0 / m.gamma_eff;
  const FitResult v = fit_exponential(solve(p, {0.1, t_end}), p);
  const ModeSet ms = discretize(p, 1000, 0.0, default_span(p));
  const ModeRun run = solve_modes(p, ms, t_end, std::min(0.05, max_mode_step(p, ms)));
  const FitResult w = fit_exponential(run.trace, p);
  CHECK(v.gamma_fit / m.gamma_eff == doctest::Approx(1.0).epsilon(0.03));
  CHECK(w.gamma_fit / m.gamma_eff == doctest::Approx(1.0).epsilon(0.03));
  CHECK(w.gamma_fit / v.gamma_fit == doctest::Approx(1.0).epsilon(0.03));
  // fitted phase slope has the sign of the shift
  CHECK(v.shift_fit > 0.0);
  CHECK(w.shift_fit > 0.0);
}

TEST_CASE("non-exponential cutoffs use quadrature")
{
  const MarkovSummary s = markov_summary(make_params(1.0, 1e-3, sharp_cutoff(4.0)));
  CHECK(s.gamma_eff == doctest::Approx(2e-3 * M_PI).epsilon(1e-9));
  CHECK(s.shift == doctest::Approx(1e-3 * (64.0 / 3.0 + 12.0 + std::log(3.0))).epsilon(1e-9));
  CHECK(s.shift_leading == 0.0);
}
