#include "wwlab/volterra.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <future>
#include <limits>

#include <Eigen/LU>

#include "wwlab/kernel.hpp"
#include "wwlab/quadrature.hpp"

namespace ww {

std::complex<double> ExponentialSum::operator()(double tau) const
{
  std::complex<double> s = 0.0;
  for (std::size_t k = 0; k < rates.size(); ++k) s += amplitudes[k] * std::exp(-rates[k] * tau);
  return s;
}

ExponentialSum exponential_sum(double eps, double tau_min, double tau_max, double tol)
{
  if (!(eps > 0)) throw Error(ErrorKind::NonpositiveEps, "eps must be positive");
  if (!(tau_min > 0) || !(tau_max > tau_min))
    throw Error(ErrorKind::InvalidArgument, "exponential sum needs 0 < tau_min < tau_max");
  // x < x_lo drops at most x_lo^4/4 <= tol*6/tau_max^4; x > x_hi is below e^{-50} tau_min^-4
  const double x_lo = std::pow(24.0 * tol, 0.25) / tau_max;
  const double x_hi = 50.0 / tau_min;
  const double dy = 0.2;
  const int n = int(std::ceil(std::log(x_hi / x_lo) / dy)) + 1;
  ExponentialSum s;
  s.amplitudes.reserve(n);
  s.rates.reserve(n);
  for (int k = 0; k < n; ++k) {
    const double x = x_lo * std::exp(k * dy);
    const double x2 = x * x;
    s.rates.push_back(x);
    s.amplitudes.push_back(dy * x2 * x2 * std::polar(1.0, x * eps));
  }
  return s;
}

double kernel_tail_bound(const CutoffSpec& spec, double t)
{
  switch (kind_of(spec)) {
  case CutoffKind::Exponential: return 2.0 / (t * t * t); // int_t^inf 6/tau^4
  case CutoffKind::ApShape: {
    // K ~ -nu_ref^2/tau^2 at large tau; factor 2 margin
    const double nr = std::get<ApShapeCutoff>(spec).nu_ref;
    return 2.0 * nr * nr / t;
  }
  default: return std::numeric_limits<double>::infinity();
  }
}

namespace {

double resonant_rate_per_D(const AtomFieldParams& p)
{
  return 2.0 * constants::pi * spectral_weight(p.cutoff, p.nu);
}

} // namespace

double default_memory(const AtomFieldParams& p)
{
  const double ts = time_scale(p.cutoff);
  double t = 20.0 * ts;
  const double target = 1e-3 * resonant_rate_per_D(p);
  if (kind_of(p.cutoff) == CutoffKind::Exponential && target > 0)
    t = std::max(t, std::cbrt(2.0 / target) * (1.0 + 1e-9));
  else if (kind_of(p.cutoff) == CutoffKind::ApShape && target > 0) {
    const double nr = std::get<ApShapeCutoff>(p.cutoff).nu_ref;
    t = std::max(t, 2.0 * nr * nr / target * (1.0 + 1e-9));
  }
  return t;
}

namespace {

constexpr double tiny_slack = 1e-12;

struct Weights {
  // history-start corrections; end corrections mirror them
  std::vector<double> edge;
  double derivative_implicit; // coefficient of F_m in the step formula
};

Weights weights_for(Scheme s)
{
  if (s == Scheme::TrapezoidProduct) return {{0.5}, 0.5};
  return {{3.0 / 8.0, 7.0 / 6.0, 23.0 / 24.0}, 9.0 / 24.0};
}

std::complex<double> memory_kernel(const AtomFieldParams& p, double tau)
{
  return p.D * kernel_value(p.cutoff, tau) * std::polar(1.0, p.nu * tau);
}

// c_1..c_4 and F_1..F_4 from quartic interpolation of c on [0, 4h].
void rk4_starter(const AtomFieldParams& p, double h, Eigen::VectorXcd& c, Eigen::VectorXcd& F)
{
  const auto gl = gauss_legendre<double>(24);
  auto lagrange = [](int j, double x) {
    double v = 1.0;
    for (int i = 0; i < 5; ++i)
      if (i != j) v *= (x - i) / double(j - i);
    return v;
  };
  // inner(r, j) = int_0^r M(r - s) l_j(s/h) ds
  auto inner = [&](double r, int j) {
    std::complex<double> s = 0.0;
    for (int q = 0; q < gl.nodes.size(); ++q) {
      const double x = 0.5 * r * (1.0 + gl.nodes(q));
      s += gl.weights(q) * memory_kernel(p, r - x) * lagrange(j, x / h);
    }
    return 0.5 * r * s;
  };
  Eigen::Matrix<std::complex<double>, 4, 5> A, B;
  for (int n = 1; n <= 4; ++n) {
    const double tn = n * h;
    for (int j = 0; j < 5; ++j) {
      A(n - 1, j) = inner(tn, j);
      std::complex<double> outer = 0.0;
      for (int q = 0; q < gl.nodes.size(); ++q)
        outer += gl.weights(q) * inner(0.5 * tn * (1.0 + gl.nodes(q)), j);
      B(n - 1, j) = 0.5 * tn * outer;
    }
  }
  // c_n = 1 - sum_j B(n, j) c_j with c_0 = 1
  const Eigen::Matrix4cd lhs = Eigen::Matrix4cd::Identity() + B.rightCols<4>();
  const Eigen::Vector4cd rhs = Eigen::Vector4cd::Ones() - B.col(0);
  const Eigen::Vector4cd sol = lhs.partialPivLu().solve(rhs);
  c.segment<4>(1) = sol;
  for (int n = 1; n <= 4; ++n) F(n) = A.row(n - 1) * c.head<5>();
}

void check_config(const AtomFieldParams& p, const SolverConfig& cfg)
{
  if (!(cfg.dt > 0) || !(cfg.t_end > 0))
    throw Error(ErrorKind::InvalidArgument, "dt and t_end must be positive");
  const double ts = time_scale(p.cutoff);
  if (cfg.dt > 0.1 * ts * (1.0 + tiny_slack))
    throw Error(ErrorKind::StepTooLarge, "dt must not exceed eps/10 to resolve the kernel peak");
  if (cfg.history == HistoryMode::Full) return;
  if (cfg.t_mem < 20.0 * ts * (1.0 - tiny_slack))
    throw Error(ErrorKind::MemoryTooShort, "t_mem must be at least 20 eps");
  if (cfg.history == HistoryMode::Compressed && kind_of(p.cutoff) != CutoffKind::Exponential)
    throw Error(ErrorKind::UnsupportedCutoff, "compressed history needs the exponential cutoff");
  if (cfg.history == HistoryMode::Truncated &&
      !(kernel_tail_bound(p.cutoff, cfg.t_mem) < 1e-3 * resonant_rate_per_D(p)))
    throw Error(ErrorKind::MemoryTooShort, "kernel tail beyond t_mem exceeds 1e-3 Gamma_eff");
}

} // namespace

AmplitudeTrace solve(const AtomFieldParams& p, const SolverConfig& cfg)
{
  validate(p);
  if (!is_integrable(p.cutoff))
    throw Error(ErrorKind::DivergentKernel, "no cutoff: the memory kernel is not finite");
  check_config(p, cfg);

  const double h = cfg.dt;
  const double ratio = cfg.t_end / h;
  const Eigen::Index N = std::max<Eigen::Index>(
      std::abs(ratio - std::round(ratio)) < 1e-9 * ratio ? Eigen::Index(std::llround(ratio))
                                                          : Eigen::Index(std::ceil(ratio)),
      1);
  const bool rk4 = cfg.scheme == Scheme::RK4Volterra;
  if (rk4 && N < 5) throw Error(ErrorKind::InvalidArgument, "RK4Volterra needs at least 5 steps");

  Eigen::Index J = N + 1; // first lag handled outside the direct sum
  if (cfg.history != HistoryMode::Full) {
    J = std::max<Eigen::Index>(Eigen::Index(std::floor(cfg.t_mem / h * (1.0 + tiny_slack))), 3);
    if (cfg.history == HistoryMode::Truncated) ++J;
    J = std::min(J, N + 1);
  }
  const Eigen::Index near = J - 1; // direct lags 1..near

  Eigen::VectorXcd M(near + 1);
  for (Eigen::Index l = 0; l <= near; ++l) M(l) = memory_kernel(p, double(l) * h);

  const Weights w = weights_for(cfg.scheme);
  const std::vector<double>& edge = w.edge;
  const int ne = int(edge.size());

  // far-history recursion for the compressed mode
  const bool compressed = cfg.history == HistoryMode::Compressed && J <= N;
  Eigen::VectorXcd Z, E1, EJ, Amp;
  if (compressed) {
    const double eps = std::get<ExponentialCutoff>(p.cutoff).eps;
    const ExponentialSum es = exponential_sum(eps, double(J) * h, std::max(N * h, 2.0 * J * h));
    const Eigen::Index K = Eigen::Index(es.rates.size());
    Z = Eigen::VectorXcd::Zero(K);
    E1.resize(K);
    EJ.resize(K);
    Amp.resize(K);
    for (Eigen::Index k = 0; k < K; ++k) {
      const std::complex<double> lam(-es.rates[k], p.nu);
      E1(k) = std::exp(lam * h);
      EJ(k) = std::exp(lam * (double(J) * h));
      Amp(k) = p.D * es.amplitudes[k];
    }
  }

  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(N + 1);
  Eigen::VectorXcd F = Eigen::VectorXcd::Zero(N + 1);
  c(0) = 1.0;

  auto start_weight = [&](Eigen::Index j) { return j < ne ? edge[j] : 1.0; };
  Eigen::Index m0 = 1;
  if (rk4) {
    rk4_starter(p, h, c, F);
    m0 = 5;
    if (compressed) {
      for (Eigen::Index m = 1; m < m0; ++m) {
        Z = E1.cwiseProduct(Z);
        if (m - J >= 0) Z += (h * start_weight(m - J) * c(m - J)) * EJ;
      }
    }
  }

  const double imp = w.derivative_implicit;
  const std::complex<double> denom = 1.0 + imp * h * (h * edge[0]) * M(0);

  for (Eigen::Index m = m0; m <= N; ++m) {
    // explicit part of F_m: h sum_{j < m} w_{m,j} M_{m-j} c_j
    const Eigen::Index jlo = std::max<Eigen::Index>(0, m - near);
    const Eigen::Index len = m - jlo; // lags 1..len
    std::complex<double> s =
        (M.segment(1, len).array() * c.segment(jlo, len).reverse().array()).sum();
    for (Eigen::Index j = jlo; j < std::min<Eigen::Index>(ne, m); ++j)
      s += (start_weight(j) - 1.0) * M(m - j) * c(j);
    if (rk4)
      for (int e = 1; e < ne; ++e) s += (edge[e] - 1.0) * M(e) * c(m - e);
    std::complex<double> Fhat = h * s;
    if (compressed) {
      if (m - J >= 0) Z = E1.cwiseProduct(Z) + (h * start_weight(m - J) * c(m - J)) * EJ;
      else Z = E1.cwiseProduct(Z);
      Fhat += (Amp.array() * Z.array()).sum();
    }

    std::complex<double> rhs;
    if (rk4)
      rhs = c(m - 1) - h / 24.0 * (9.0 * Fhat + 19.0 * F(m - 1) - 5.0 * F(m - 2) + F(m - 3));
    else
      rhs = c(m - 1) - 0.5 * h * (F(m - 1) + Fhat);
    c(m) = rhs / denom;
    F(m) = Fhat + h * edge[0] * M(0) * c(m);
  }

  AmplitudeTrace tr;
  tr.times.resize(N + 1);
  for (Eigen::Index m = 0; m <= N; ++m) tr.times(m) = double(m) * h;
  tr.c_e = c;
  tr.norm_sq = c.cwiseAbs2();
  return tr;
}

std::vector<ConvergencePoint> convergence_study(const AtomFieldParams& p, const SolverConfig& cfg,
                                                int refinements)
{
  if (refinements < 2) throw Error(ErrorKind::InvalidArgument, "convergence study needs >= 2 refinements");
  std::vector<std::future<AmplitudeTrace>> runs;
  for (int k = 0; k <= refinements; ++k) {
    SolverConfig c = cfg;
    c.dt = cfg.dt / double(1 << k);
    runs.push_back(std::async(std::launch::async, [&p, c] { return solve(p, c); }));
  }
  std::vector<AmplitudeTrace> traces;
  for (auto& r : runs) traces.push_back(r.get());
  // Richardson-extrapolated reference from the two finest grids
  const AmplitudeTrace& fine = traces[refinements];
  const AmplitudeTrace& prev = traces[refinements - 1];
  const double gain = cfg.scheme == Scheme::RK4Volterra ? 15.0 : 3.0; // 2^p - 1
  auto reference = [&](Eigen::Index n_prev) {
    const std::complex<double> f = fine.c_e(2 * n_prev);
    return f + (f - prev.c_e(n_prev)) / gain;
  };
  std::vector<ConvergencePoint> out;
  for (int k = 0; k < refinements; ++k) {
    const Eigen::Index stride = Eigen::Index(1) << (refinements - 1 - k);
    double err = 0.0;
    for (Eigen::Index n = 0; n < traces[k].size() && 2 * n * stride < fine.size(); ++n)
      err = std::max(err, std::abs(traces[k].c_e(n) - reference(n * stride)));
    out.push_back({traces[k].times(1), err});
  }
  return out;
}

std::vector<double> observed_orders(const std::vector<ConvergencePoint>& study)
{
  std::vector<double> orders;
  for (std::size_t k = 0; k + 1 < study.size(); ++k)
    orders.push_back(std::log(study[k].error / study[k + 1].error) /
                     std::log(study[k].dt / study[k + 1].dt));
  return orders;
}

} // namespace ww
