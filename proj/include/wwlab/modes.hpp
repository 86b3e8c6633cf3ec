#pragma once

#include <complex>

#include <Eigen/Core>

#include "wwlab/params.hpp"
#include "wwlab/volterra.hpp"

namespace ww {

struct ModeSet {
  Eigen::VectorXd omegas;
  Eigen::VectorXd weights;      // |g_j|^2 = D w(omega_j) q_j
  Eigen::VectorXd quad_weights; // q_j

  Eigen::Index count() const { return omegas.size(); }
};

enum class ModeLayout {
  Resonant,      // uniform core around the shifted line, graded Gauss-Legendre flanks
  GaussLegendre, // uniform composite Gauss-Legendre panels
};

// Core half-width and spacing in units of Gamma_eff; flank panels follow the density
// w(omega)/max(|omega - center|, half_width)^flank_exponent, blended with (w/w_max)^(1/4)
// carrying smooth_share of the flank panels so the bulk of w stays resolved.
struct ResonantDesign {
  double core_half_width = 100.0;
  double core_spacing = 1.0;
  double flank_exponent = 1.75;
  double smooth_share = 0.25;
  int panel_order = 4;
};

// Fraction of int_0^inf w lying outside [omega_lo, omega_hi].
double tail_mass(const CutoffSpec& spec, double omega_lo, double omega_hi);

ModeSet discretize(const AtomFieldParams& p, int n_modes, double omega_lo, double omega_hi,
                   ModeLayout layout = ModeLayout::Resonant, const ResonantDesign& design = {});

// Upper end of the default span: 30/eps + nu (exponential), scaled alike for the others.
double default_span(const AtomFieldParams& p);

struct FullState {
  std::complex<double> c_e = 1.0;
  Eigen::VectorXcd c_g;

  double norm_sq() const { return std::norm(c_e) + c_g.squaredNorm(); }
};

struct ModeRun {
  AmplitudeTrace trace;
  FullState final_state;
  double max_norm_drift = 0.0;
};

// Largest dt allowed by dt * max|nu - omega_j| <= 0.1.
double max_mode_step(const AtomFieldParams& p, const ModeSet& m);

// Classical RK4 on c_e' = -i sum g_j e^{i(nu - w_j)t} c_j, c_j' = -i g_j e^{-i(nu - w_j)t} c_e.
ModeRun solve_modes(const AtomFieldParams& p, const ModeSet& m, double t_end, double dt,
                    int output_every = 1);

// Generator -iH of the phase-absorbed system, H = [[0, g^T], [g, -diag(nu - omega)]].
Eigen::MatrixXcd mode_generator(const AtomFieldParams& p, const ModeSet& m);

} // namespace ww
