#pragma once

#include "wwlab/cutoff.hpp"

namespace ww {

namespace constants {
inline constexpr double pi = 3.141592653589793238462643383279502884;
inline constexpr double fine_structure = 7.2973525693e-3;
} // namespace constants

// Dimensionless: time unit 1/nu of the reference transition. AtomicHydrogen: time unit a0/c.
enum class UnitSystem { Dimensionless, AtomicHydrogen };

struct AtomFieldParams {
  double nu = 1.0;
  double D = 0.0; // prefactor of the memory integral, time^2
  CutoffSpec cutoff = NoCutoff{};
  UnitSystem units = UnitSystem::Dimensionless;
};

AtomFieldParams make_params(double nu, double D, CutoffSpec cutoff,
                            UnitSystem units = UnitSystem::Dimensionless);

// nu > 0, D >= 0 and a well-formed cutoff; throws otherwise.
void validate(const AtomFieldParams& p);

inline double gamma(const AtomFieldParams& p)
{
  return 2.0 * constants::pi * p.nu * p.nu * p.nu * p.D;
}

// 1s-2p hydrogen numbers in units of e*a0 and c/a0.
double hydrogen_dipole();
double hydrogen_nu();

enum class HydrogenCoupling {
  Exact,       // D from |d| = 128 sqrt(2)/243 e a0
  Rounded // D = alpha/(2 pi) (a0/c)^2
};

double hydrogen_D(HydrogenCoupling coupling = HydrogenCoupling::Exact);

// Exponential cutoff eps = 10 a0/c.
AtomFieldParams hydrogen_preset(HydrogenCoupling coupling = HydrogenCoupling::Exact);

// nu = 1, D = 1e-3, eps = 0.3
AtomFieldParams hydrogen_scaled_preset();

// A.p cutoff shape with eps = 2/3 a0/c for hydrogen sets, and nu_ref = p.nu.
CutoffSpec ap_shape_for(const AtomFieldParams& p, double eps_dimensionless = 0.0);

// Rescale so that nu == 1; dimensionless products eps*nu, Gamma/nu, D*nu^2 are kept.
AtomFieldParams to_dimensionless(const AtomFieldParams& p);
AtomFieldParams from_dimensionless(const AtomFieldParams& p, double nu, UnitSystem units);

struct ValidityReport {
  double lower_bound = 0.0;
  double upper_bound = 0.0;
  double eps_scaled = 0.0;
  double lower_margin = 0.0; // eps_scaled / lower_bound
  double upper_margin = 0.0; // upper_bound / eps_scaled
  double lamb_ratio = 0.0;   // (2D/eps^3)/nu
  double rate_ratio = 0.0;   // Gamma/nu
  double star_threshold = 0.1;
  bool window_ok = false;
  bool star_ok = false;
};

ValidityReport validity_report(const AtomFieldParams& p, double star_threshold = 0.1);

} // namespace ww
