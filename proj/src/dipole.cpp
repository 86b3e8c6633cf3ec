#include "wwlab/dipole.hpp"

#include <cmath>

#include "wwlab/error.hpp"
#include "wwlab/params.hpp"
#include "wwlab/quadrature.hpp"

namespace ww {

using constants::pi;

SelfEnergyResult self_energy_sharp(double q, double omega_cut)
{
  if (!(omega_cut >= 0)) throw Error(ErrorKind::InvalidArgument, "cutoff frequency must be >= 0");
  const double c3 = si::speed_of_light * si::speed_of_light * si::speed_of_light;
  return {q * q * omega_cut * omega_cut * omega_cut / (18.0 * pi * pi * si::vacuum_permittivity * c3)};
}

SelfEnergyResult self_energy_smooth(double q, double eps)
{
  if (!(eps > 0)) throw Error(ErrorKind::NonpositiveEps, "eps must be positive");
  const double ec = eps * si::speed_of_light;
  return {q * q / (3.0 * pi * pi * si::vacuum_permittivity * ec * ec * ec)};
}

double angular_factor()
{
  const auto rule = gauss_legendre<double>(32);
  double s = 0.0;
  for (Eigen::Index i = 0; i < rule.nodes.size(); ++i) {
    const double th = 0.5 * pi * (1.0 + rule.nodes(i));
    const double c = std::cos(th);
    s += rule.weights(i) * std::sin(th) * c * c;
  }
  return 0.5 * pi * s;
}

double smooth_angular_normalization(double eps, double k)
{
  const double f2 = std::exp(-eps * si::speed_of_light * k);
  return 2.0 * pi * angular_factor() * f2 / (4.0 * pi / 3.0);
}

double hydrogen_smooth_shift_ratio(double eps_a0_over_c)
{
  const double eps = eps_a0_over_c * si::bohr_radius / si::speed_of_light;
  const SelfEnergyResult s = self_energy_smooth(si::elementary_charge, eps);
  const double a2 = si::bohr_radius * si::bohr_radius;
  const double shift = s.as_frequency_shift((HydrogenR2::excited - HydrogenR2::ground) * a2);
  const double nu = hydrogen_nu() * si::speed_of_light / si::bohr_radius;
  return shift / nu;
}

MatrixElementComparison compare_ap_er(double q, double nu, double omega_k, double r_element)
{
  if (!(omega_k > 0)) throw Error(ErrorKind::InvalidArgument, "omega_k must be positive");
  const double amp = q * std::sqrt(si::hbar / (2.0 * si::vacuum_permittivity)) * r_element;
  MatrixElementComparison m;
  m.er_element = std::sqrt(omega_k) * amp;
  m.ap_element = nu / std::sqrt(omega_k) * amp;
  m.ratio = nu / omega_k;
  return m;
}

DiagonalEnergies diagonal_energies_ap(double q, double omega_k, double mass)
{
  if (!(omega_k > 0)) throw Error(ErrorKind::InvalidArgument, "omega_k must be positive");
  DiagonalEnergies d;
  d.photon = si::hbar * omega_k;
  d.frequency_dependent = q * q * si::hbar / (2.0 * mass * omega_k * si::vacuum_permittivity);
  return d;
}

DiagonalEnergies diagonal_energies_er(double omega_k, double self_energy)
{
  if (!(omega_k > 0)) throw Error(ErrorKind::InvalidArgument, "omega_k must be positive");
  DiagonalEnergies d;
  d.photon = si::hbar * omega_k;
  d.constant = self_energy;
  return d;
}

} // namespace ww
