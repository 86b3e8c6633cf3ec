#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include <Eigen/Eigenvalues>

#include "wwlab/kernel.hpp"
#include "wwlab/markov.hpp"
#include "wwlab/modes.hpp"

using namespace ww;
using Eigen::Index;

namespace {

const AtomFieldParams scaled = hydrogen_scaled_preset();

ModeSet single_mode(double omega, double g2)
{
  ModeSet m;
  m.omegas = Eigen::VectorXd::Constant(1, omega);
  m.weights = Eigen::VectorXd::Constant(1, g2);
  m.quad_weights = Eigen::VectorXd::Constant(1, 1.0);
  return m;
}

} // namespace

TEST_CASE("rabi oscillation")
{
  const double g = 0.2;
  const ModeRun r = solve_modes(scaled, single_mode(1.0, g * g), 40.0, 0.01);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < r.trace.size(); ++i) {
    const double c = std::cos(g * r.trace.times(i));
    worst = std::max(worst, std::abs(r.trace.norm_sq(i) - c * c));
  }
  CHECK(worst < 1e-9);
  CHECK(r.max_norm_drift < 1e-9);

  // detuned: |c_e|^2 = 1 - (4g^2/W^2) sin^2(W t/2), W = sqrt(delta^2 + 4 g^2)
  const double d = 0.3, W = std::sqrt(d * d + 4 * g * g);
  const ModeRun q = solve_modes(scaled, single_mode(1.0 - d, g * g), 40.0, 0.01);
  for (Eigen::Index i = 0; i < q.trace.size(); i += 97) {
    const double s = std::sin(0.5 * W * q.trace.times(i));
    CHECK(q.trace.norm_sq(i) == doctest::Approx(1.0 - 4 * g * g / (W * W) * s * s).epsilon(1e-9));
  }
}

TEST_CASE("mode set structure")
{
  const ModeSet m = discretize(scaled, 500, 0.0, default_span(scaled));
  CHECK(m.count() == 500);
  CHECK(m.omegas.minCoeff() >= 0.0);
  for (Eigen::Index j = 1; j < m.count(); ++j) CHECK(m.omegas(j) > m.omegas(j - 1));
  for (Eigen::Index j = 0; j < m.count(); ++j)
    CHECK(m.weights(j) == doctest::Approx(1e-3 * spectral_weight(scaled.cutoff, m.omegas(j)) * m.quad_weights(j)));
  CHECK(m.quad_weights.sum() == doctest::Approx(default_span(scaled)).epsilon(1e-12));
  CHECK(m.weights.sum() == doctest::Approx(1e-3 * weight_total(scaled.cutoff)).epsilon(1e-6));

  for (int n : {2, 3, 9, 17, 41}) {
    const ModeSet g = discretize(scaled, n, 0.0, 120.0, ModeLayout::GaussLegendre);
    CHECK(g.count() == n);
    // exact for linear integrands over the span
    CHECK((g.quad_weights.array() * (2.0 + 3.0 * g.omegas.array())).sum() ==
          doctest::Approx(2.0 * 120.0 + 1.5 * 120.0 * 120.0).epsilon(1e-13));
  }
  CHECK_THROWS_AS(discretize(scaled, 1, 0.0, 120.0), Error);
}

TEST_CASE("kernel from the mode sum")
{
  const ModeSet m = discretize(scaled, 2000, 0.0, default_span(scaled));
  std::complex<double> s = 0.0;
  for (Eigen::Index j = 0; j < m.count(); ++j) s += m.weights(j) * std::polar(1.0, -0.3 * m.omegas(j));
  const std::complex<double> k = 1e-3 * kernel_analytic(0.3, 0.3);
  CHECK(std::abs(s - k) / std::abs(k) < 1e-4);
}

TEST_CASE("span checks")
{
  try {
    discretize(scaled, 100, 0.0, 50.0);
    FAIL("expected SpanTooSmall");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SpanTooSmall);
  }
  const AtomFieldParams h = hydrogen_preset();
  // [0, 400 nu] leaves 5.1e-3 of the weight beyond the span at eps = 10 a0/c
  CHECK(tail_mass(h.cutoff, 0.0, 400.0 * h.nu) == doctest::Approx(5.1e-3).epsilon(0.01));
  CHECK_THROWS_AS(discretize(h, 500, 0.0, 400.0 * h.nu), Error);
  CHECK(tail_mass(h.cutoff, 0.0, default_span(h)) < 1e-6);
  CHECK_NOTHROW(discretize(h, 500, 0.0, default_span(h)));
}

TEST_CASE("step bound")
{
  const ModeSet m = discretize(scaled, 100, 0.0, default_span(scaled));
  const double dt = max_mode_step(scaled, m);
  CHECK(dt * (1.0 - m.omegas.maxCoeff()) == doctest::Approx(-0.1).epsilon(1e-12));
  CHECK_THROWS_AS(solve_modes(scaled, m, 1.0, 1.01 * dt), Error);
  CHECK_NOTHROW(solve_modes(scaled, m, 1.0, dt));
}

TEST_CASE("eigen-decomposition oracle")
{
  const ModeSet m = discretize(scaled, 60, 0.0, default_span(scaled));
  const Index n = m.count();
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(n + 1, n + 1);
  for (Index j = 0; j < n; ++j) {
    H(0, j + 1) = H(j + 1, 0) = std::sqrt(m.weights(j));
    H(j + 1, j + 1) = -(1.0 - m.omegas(j));
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
  const Eigen::VectorXd u0 = es.eigenvectors().row(0).transpose();

  const ModeRun r = solve_modes(scaled, m, 200.0, max_mode_step(scaled, m), 10);
  double worst = 0.0;
  for (Index i = 0; i < r.trace.size(); ++i) {
    std::complex<double> c = 0.0;
    for (Index k = 0; k <= n; ++k) c += u0(k) * u0(k) * std::polar(1.0, -es.eigenvalues()(k) * r.trace.times(i));
    worst = std::max(worst, std::abs(c - r.trace.c_e(i)));
  }
  CHECK(worst < 1e-8);
  CHECK(r.max_norm_drift < 1e-9);
}

TEST_CASE("generator is anti-hermitian")
{
  const ModeSet m = discretize(scaled, 40, 0.0, default_span(scaled));
  const Eigen::MatrixXcd G = mode_generator(scaled, m);
  CHECK((G + G.adjoint()).cwiseAbs().maxCoeff() == 0.0);
  const Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(G);
  CHECK(es.eigenvalues().real().cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("finite box recurrence")
{
  const double g = markov_summary(scaled).gamma_eff;
  const ModeSet m = discretize(scaled, 50, 0.0, default_span(scaled));
  const ModeRun r = solve_modes(scaled, m, 4.0 / g, max_mode_step(scaled, m), 20);
  double rise = 0.0, low = 1.0;
  for (Index i = 0; i < r.trace.size(); ++i) {
    low = std::min(low, r.trace.norm_sq(i));
    rise = std::max(rise, r.trace.norm_sq(i) - low);
  }
  CHECK(rise > 0.05);
  CHECK(r.max_norm_drift < 1e-9);
}

TEST_CASE("continuum convergence over a short window")
{
  const double g = markov_summary(scaled).gamma_eff;
  const double t_end = 0.5 / g, dt = 0.3 / 40;
  const AmplitudeTrace ref = solve(scaled, {dt, t_end, HistoryMode::Full, 0.0, Scheme::RK4Volterra});
  double prev = 1.0;
  for (int n : {250, 500, 1000}) {
    const ModeSet m = discretize(scaled, n, 0.0, default_span(scaled));
    const ModeRun r = solve_modes(scaled, m, t_end, dt / 8, 8);
    double err = 0.0;
    for (Index i = 0; i < std::min(ref.size(), r.trace.size()); ++i)
      err = std::max(err, std::abs(ref.norm_sq(i) - r.trace.norm_sq(i)));
    CHECK(err < prev);
    prev = err;
    CHECK(r.max_norm_drift < 1e-9);
  }
}
