#pragma once

#include <complex>
#include <vector>

#include <Eigen/Core>

#include "wwlab/params.hpp"

namespace ww {

enum class HistoryMode {
  Full,       // every lag summed directly
  Truncated,  // lags beyond t_mem dropped
  Compressed, // lags beyond t_mem through a sum of exponentials of the kernel
};

enum class Scheme {
  TrapezoidProduct, // order 2
  RK4Volterra,      // Adams-Moulton 4 with Gregory history weights, order 4
};

struct SolverConfig {
  double dt = 0.0;
  double t_end = 0.0;
  HistoryMode history = HistoryMode::Full;
  double t_mem = 0.0;
  Scheme scheme = Scheme::TrapezoidProduct;
};

struct AmplitudeTrace {
  Eigen::VectorXd times;
  Eigen::VectorXcd c_e;
  Eigen::VectorXd norm_sq;

  Eigen::Index size() const { return times.size(); }
};

// c_e' = -int_0^t M(t - s) c_e(s) ds, M(tau) = D K(tau) e^{i nu tau}, c_e(0) = 1.
AmplitudeTrace solve(const AtomFieldParams& p, const SolverConfig& cfg);

// Upper bound on int_{t}^inf |K| (D-stripped); infinite where no bound is available.
double kernel_tail_bound(const CutoffSpec& spec, double t);

// Smallest t_mem with t_mem >= 20 eps and D*tail < 1e-3 Gamma_eff.
double default_memory(const AtomFieldParams& p);

// K(tau) ~ sum_k amplitude_k exp(-rate_k tau) on [tau_min, tau_max] for 6/(tau - i eps)^4,
// from K = int_0^inf x^3 e^{i x eps} e^{-x tau} dx discretized by the trapezoid rule in ln x.
struct ExponentialSum {
  std::vector<std::complex<double>> amplitudes;
  std::vector<double> rates;

  std::complex<double> operator()(double tau) const;
};

ExponentialSum exponential_sum(double eps, double tau_min, double tau_max, double tol = 1e-13);

struct ConvergencePoint {
  double dt;
  double error;
};

// Solves at dt, dt/2, ..., dt/2^refinements; errors against the finest grid on each coarse grid.
std::vector<ConvergencePoint> convergence_study(const AtomFieldParams& p, const SolverConfig& cfg,
                                                int refinements);

std::vector<double> observed_orders(const std::vector<ConvergencePoint>& study);

} // namespace ww
