#include "wwlab/modes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "wwlab/markov.hpp"
#include "wwlab/quadrature.hpp"

namespace ww {

double tail_mass(const CutoffSpec& spec, double omega_lo, double omega_hi)
{
  if (!is_integrable(spec)) throw Error(ErrorKind::DivergentIntegral, "total spectral weight diverges");
  const double total = weight_total(spec);
  const double outside = weight_tail(spec, omega_hi) + (total - weight_tail(spec, omega_lo));
  return outside / total;
}

double default_span(const AtomFieldParams& p)
{
  switch (kind_of(p.cutoff)) {
  case CutoffKind::Exponential: return 30.0 / std::get<ExponentialCutoff>(p.cutoff).eps + p.nu;
  case CutoffKind::ApShape: return 20.0 / std::get<ApShapeCutoff>(p.cutoff).eps + p.nu;
  case CutoffKind::Sharp: return std::get<SharpCutoff>(p.cutoff).omega_max;
  case CutoffKind::None: break;
  }
  throw Error(ErrorKind::DivergentIntegral, "no cutoff: the mode continuum has no finite span");
}

namespace {

struct Nodes {
  std::vector<double> x, q;
};

void append_gauss(Nodes& out, const GaussRule<double>& rule, double a, double b)
{
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  for (Eigen::Index i = 0; i < rule.nodes.size(); ++i) {
    out.x.push_back(c + h * rule.nodes(i));
    out.q.push_back(h * rule.weights(i));
  }
}

Nodes gauss_layout(int n, double lo, double hi)
{
  Nodes out;
  if (n <= 8) {
    append_gauss(out, gauss_legendre<double>(n), lo, hi);
    return out;
  }
  const int panels = n / 4;
  const int extra = n - 4 * panels;
  const auto g4 = gauss_legendre<double>(4);
  const double h = (hi - lo) / panels;
  for (int k = 0; k < panels; ++k) {
    const double a = lo + k * h, b = k + 1 == panels ? hi : lo + (k + 1) * h;
    append_gauss(out, k + 1 == panels && extra ? gauss_legendre<double>(4 + extra) : g4, a, b);
  }
  return out;
}

// Panel edges at equal-mass quantiles of a density sampled on [a, b].
template <typename Density>
std::vector<double> quantile_edges(Density rho, double a, double b, int panels)
{
  const int m = 200000;
  std::vector<double> x(m + 1), cum(m + 1, 0.0);
  for (int i = 0; i <= m; ++i) x[i] = a + (b - a) * double(i) / m;
  double prev = rho(x[0]);
  for (int i = 1; i <= m; ++i) {
    const double cur = rho(x[i]);
    cum[i] = cum[i - 1] + 0.5 * (prev + cur) * (x[i] - x[i - 1]);
    prev = cur;
  }
  std::vector<double> edges{a};
  int i = 0;
  for (int k = 1; k < panels; ++k) {
    const double target = cum[m] * double(k) / panels;
    while (i < m && cum[i + 1] < target) ++i;
    const double span = cum[i + 1] - cum[i];
    const double f = span > 0 ? (target - cum[i]) / span : 0.0;
    edges.push_back(x[i] + f * (x[i + 1] - x[i]));
  }
  edges.push_back(b);
  return edges;
}

template <typename Density>
double density_mass(Density rho, double a, double b)
{
  if (!(b > a)) return 0.0;
  return integrate(rho, a, b, 0.0, 1e-8).value;
}

Nodes resonant_layout(const AtomFieldParams& p, int n, double lo, double hi, const ResonantDesign& d)
{
  const MarkovSummary ms = markov_summary(p);
  const double g = ms.gamma_eff;
  const double center = p.nu - ms.shift;
  const int order = d.panel_order;
  if (!(g > 0) || n < 4 * order || center <= lo || center >= hi) return gauss_layout(n, lo, hi);

  const double half = d.core_half_width * g;
  int n_core = std::min(int(std::lround(2.0 * half / (d.core_spacing * g))), n / 2);
  const int n_far = ((n - n_core) / order) * order;
  n_core = n - n_far;

  const double core_lo = std::max(lo, center - half);
  const double core_hi = std::min(hi, center + half);
  auto line = [&](double w) {
    const double r = std::max(std::abs(w - center), half);
    return spectral_weight(p.cutoff, w) / std::pow(r, d.flank_exponent);
  };
  double w_max = 0.0;
  for (int i = 0; i <= 2000; ++i) w_max = std::max(w_max, spectral_weight(p.cutoff, lo + (hi - lo) * i / 2000.0));
  auto bulk = [&](double w) { return std::pow(spectral_weight(p.cutoff, w) / w_max, 0.25); };
  const double line_mass = density_mass(line, lo, core_lo) + density_mass(line, core_hi, hi);
  const double bulk_mass = density_mass(bulk, lo, core_lo) + density_mass(bulk, core_hi, hi);
  const double beta = std::clamp(d.smooth_share, 0.0, 1.0);
  auto rho = [&](double w) {
    double v = 0.0;
    if (line_mass > 0) v += (1.0 - beta) * line(w) / line_mass;
    if (bulk_mass > 0) v += beta * bulk(w) / bulk_mass;
    return v;
  };
  const double ml = density_mass(rho, lo, core_lo);
  const double mr = density_mass(rho, core_hi, hi);
  const int panels = n_far / order;
  int pl = ml + mr > 0 ? int(std::lround(panels * ml / (ml + mr))) : 0;
  if (ml > 0 && pl == 0 && panels > 1) pl = 1;
  if (mr > 0 && pl == panels && panels > 1) pl = panels - 1;
  const int pr = panels - pl;

  Nodes out;
  const auto rule = gauss_legendre<double>(order);
  if (pl > 0) {
    const auto e = quantile_edges(rho, lo, core_lo, pl);
    for (int k = 0; k < pl; ++k) append_gauss(out, rule, e[k], e[k + 1]);
  }
  const double h = (core_hi - core_lo) / n_core;
  for (int k = 0; k < n_core; ++k) {
    out.x.push_back(core_lo + (k + 0.5) * h);
    out.q.push_back(h);
  }
  if (pr > 0) {
    const auto e = quantile_edges(rho, core_hi, hi, pr);
    for (int k = 0; k < pr; ++k) append_gauss(out, rule, e[k], e[k + 1]);
  }
  return out;
}

} // namespace

ModeSet discretize(const AtomFieldParams& p, int n_modes, double omega_lo, double omega_hi,
                   ModeLayout layout, const ResonantDesign& design)
{
  validate(p);
  if (n_modes < 2) throw Error(ErrorKind::InvalidArgument, "need at least two modes");
  if (!(omega_lo >= 0) || !(omega_hi > omega_lo))
    throw Error(ErrorKind::InvalidArgument, "mode span must satisfy 0 <= lo < hi");
  if (tail_mass(p.cutoff, omega_lo, omega_hi) > 1e-6)
    throw Error(ErrorKind::SpanTooSmall, "spectral weight outside the span exceeds 1e-6 of the total");

  const Nodes nodes = layout == ModeLayout::Resonant
                          ? resonant_layout(p, n_modes, omega_lo, omega_hi, design)
                          : gauss_layout(n_modes, omega_lo, omega_hi);
  ModeSet m;
  const Eigen::Index n = Eigen::Index(nodes.x.size());
  m.omegas = Eigen::Map<const Eigen::VectorXd>(nodes.x.data(), n);
  m.quad_weights = Eigen::Map<const Eigen::VectorXd>(nodes.q.data(), n);
  m.weights.resize(n);
  for (Eigen::Index j = 0; j < n; ++j)
    m.weights(j) = p.D * spectral_weight(p.cutoff, m.omegas(j)) * m.quad_weights(j);
  return m;
}

double max_mode_step(const AtomFieldParams& p, const ModeSet& m)
{
  const double detuning = (p.nu - m.omegas.array()).abs().maxCoeff();
  return detuning > 0 ? 0.1 / detuning : std::numeric_limits<double>::infinity();
}

ModeRun solve_modes(const AtomFieldParams& p, const ModeSet& m, double t_end, double dt, int output_every)
{
  validate(p);
  if (m.count() < 1) throw Error(ErrorKind::InvalidArgument, "empty mode set");
  if (!(dt > 0) || !(t_end > 0) || output_every < 1)
    throw Error(ErrorKind::InvalidArgument, "dt, t_end and output stride must be positive");
  if (dt > max_mode_step(p, m) * (1.0 + 1e-12))
    throw Error(ErrorKind::StepTooLarge, "dt * max|nu - omega_j| exceeds 0.1");

  const Eigen::ArrayXd g = m.weights.array().sqrt();
  const Eigen::ArrayXd detune = p.nu - m.omegas.array();
  const Eigen::ArrayXcd half = (std::complex<double>(0.0, 0.5 * dt) * detune).exp();
  const Eigen::ArrayXcd full = half * half;
  const std::complex<double> mi(0.0, -1.0);

  const double ratio = t_end / dt;
  const long steps = std::abs(ratio - std::round(ratio)) < 1e-9 * ratio ? std::lround(ratio)
                                                                        : long(std::ceil(ratio));
  const long records = steps / output_every + 1;

  ModeRun run;
  run.trace.times.resize(records);
  run.trace.c_e.resize(records);
  run.trace.norm_sq.resize(records);

  std::complex<double> ce = 1.0;
  Eigen::ArrayXcd cg = Eigen::ArrayXcd::Zero(m.count());
  // g_j e^{i detune_j t} at the start of the step
  Eigen::ArrayXcd gph = g.cast<std::complex<double>>();
  Eigen::ArrayXcd gph_h(m.count()), gph_1(m.count()), y(m.count());
  Eigen::ArrayXcd k1(m.count()), k2(m.count()), k3(m.count()), k4(m.count());

  run.trace.times(0) = 0.0;
  run.trace.c_e(0) = ce;
  run.trace.norm_sq(0) = 1.0;
  long rec = 1;
  for (long n = 0; n < steps; ++n) {
    gph_h = gph * half;
    gph_1 = gph * full;
    const std::complex<double> e1 = mi * (gph * cg).sum();
    k1 = mi * gph.conjugate() * ce;
    y = cg + (0.5 * dt) * k1;
    const std::complex<double> e2 = mi * (gph_h * y).sum();
    k2 = mi * gph_h.conjugate() * (ce + 0.5 * dt * e1);
    y = cg + (0.5 * dt) * k2;
    const std::complex<double> e3 = mi * (gph_h * y).sum();
    k3 = mi * gph_h.conjugate() * (ce + 0.5 * dt * e2);
    y = cg + dt * k3;
    const std::complex<double> e4 = mi * (gph_1 * y).sum();
    k4 = mi * gph_1.conjugate() * (ce + dt * e3);
    ce += dt / 6.0 * (e1 + 2.0 * e2 + 2.0 * e3 + e4);
    cg += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    const double t = double(n + 1) * dt;
    if ((n + 1) % 1024 == 0) gph = g * (std::complex<double>(0.0, t) * detune).exp();
    else gph = gph_1;

    if ((n + 1) % output_every == 0) {
      const double norm = std::norm(ce) + cg.abs2().sum();
      run.max_norm_drift = std::max(run.max_norm_drift, std::abs(norm - 1.0));
      run.trace.times(rec) = t;
      run.trace.c_e(rec) = ce;
      run.trace.norm_sq(rec) = std::norm(ce);
      ++rec;
    }
  }
  run.final_state.c_e = ce;
  run.final_state.c_g = cg.matrix();
  run.max_norm_drift = std::max(run.max_norm_drift, std::abs(run.final_state.norm_sq() - 1.0));
  return run;
}

Eigen::MatrixXcd mode_generator(const AtomFieldParams& p, const ModeSet& m)
{
  const Eigen::Index n = m.count();
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(n + 1, n + 1);
  const Eigen::VectorXd g = m.weights.cwiseSqrt();
  H.block(0, 1, 1, n) = g.transpose();
  H.block(1, 0, n, 1) = g;
  H.diagonal().tail(n) = -(p.nu - m.omegas.array()).matrix();
  return std::complex<double>(0.0, -1.0) * H.cast<std::complex<double>>();
}

} // namespace ww
