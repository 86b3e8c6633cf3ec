#pragma once

namespace ww {

// CODATA 2018, SI units.
namespace si {
inline constexpr double elementary_charge = 1.602176634e-19;
inline constexpr double vacuum_permittivity = 8.8541878128e-12;
inline constexpr double speed_of_light = 299792458.0;
inline constexpr double hbar = 1.054571817e-34;
inline constexpr double electron_mass = 9.1093837015e-31;
inline constexpr double bohr_radius = 5.29177210903e-11;
} // namespace si

struct SelfEnergyResult {
  double coefficient = 0.0; // energy per length^2, multiplies <r^2>

  double energy(double r2) const { return coefficient * r2; }
  double as_frequency_shift(double r2) const { return coefficient * r2 / si::hbar; }
};

// q^2 Omega^3 / (18 pi^2 eps0 c^3)
SelfEnergyResult self_energy_sharp(double q, double omega_cut);

// q^2 / (3 pi^2 eps0 eps^3 c^3), eps in seconds
SelfEnergyResult self_energy_smooth(double q, double eps);

// int_0^pi sin(theta) cos^2(theta) d theta by Gauss-Legendre quadrature
double angular_factor();

// int dphi int dtheta |f|^2 sin cos^2 / (4 pi/3) for one polarization with |f|^2 = e^{-eps c k}
double smooth_angular_normalization(double eps, double k);

// hydrogen 1s/2p expectation values of r^2 in units of a0^2
struct HydrogenR2 {
  static constexpr double ground = 3.0;
  static constexpr double excited = 30.0;
  static constexpr double off_diagonal = 0.0;
};

// Frequency shift of the 1s-2p line from the smooth-cutoff self-energy, relative to nu,
// with eps given in units of a0/c.
double hydrogen_smooth_shift_ratio(double eps_a0_over_c);

// Single-mode elements per unit sqrt(V).
struct MatrixElementComparison {
  double ap_element = 0.0;
  double er_element = 0.0;
  double ratio = 0.0;
};

MatrixElementComparison compare_ap_er(double q, double nu, double omega_k, double r_element);

// Diagonal excess of |g; k, s> per unit V.
struct DiagonalEnergies {
  double photon = 0.0;            // hbar omega_k
  double frequency_dependent = 0.0; // q^2 hbar/(2 m omega_k eps0) in A.p; none in E.r
  double constant = 0.0;          // omega-independent dipole self-energy in E.r

  double total() const { return photon + frequency_dependent + constant; }
};

DiagonalEnergies diagonal_energies_ap(double q, double omega_k, double mass = si::electron_mass);
DiagonalEnergies diagonal_energies_er(double omega_k, double self_energy);

} // namespace ww
