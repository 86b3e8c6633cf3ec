#include "wwlab/params.hpp"

#include <cmath>

namespace ww {

using constants::fine_structure;
using constants::pi;

AtomFieldParams make_params(double nu, double D, CutoffSpec cutoff, UnitSystem units)
{
  AtomFieldParams p{nu, D, cutoff, units};
  validate(p);
  return p;
}

void validate(const AtomFieldParams& p)
{
  if (!(p.nu > 0)) throw Error(ErrorKind::InvalidArgument, "nu must be positive");
  if (!(p.D >= 0) || !std::isfinite(p.D)) throw Error(ErrorKind::InvalidArgument, "D must be finite and >= 0");
  validate(p.cutoff);
}

double hydrogen_dipole() { return 128.0 * std::sqrt(2.0) / 243.0; }

double hydrogen_nu() { return 3.0 * fine_structure / 8.0; }

double hydrogen_D(HydrogenCoupling coupling)
{
  if (coupling == HydrogenCoupling::Rounded) return fine_structure / (2.0 * pi);
  // D = 2|d|^2/(3 (2pi)^2 eps0 hbar c^3) with e^2 = 4 pi eps0 hbar c alpha
  const double d = hydrogen_dipole();
  return 2.0 * d * d * fine_structure / (3.0 * pi);
}

AtomFieldParams hydrogen_preset(HydrogenCoupling coupling)
{
  return make_params(hydrogen_nu(), hydrogen_D(coupling), exponential_cutoff(10.0),
                     UnitSystem::AtomicHydrogen);
}

AtomFieldParams hydrogen_scaled_preset()
{
  return make_params(1.0, 1e-3, exponential_cutoff(0.3), UnitSystem::Dimensionless);
}

CutoffSpec ap_shape_for(const AtomFieldParams& p, double eps_dimensionless)
{
  if (p.units == UnitSystem::AtomicHydrogen) return ap_shape_cutoff(2.0 / 3.0, p.nu);
  // 2/3 a0/c expressed through eps*nu = (2/3)(3 alpha/8)
  const double eps = eps_dimensionless > 0 ? eps_dimensionless : 0.25 * fine_structure / p.nu;
  return ap_shape_cutoff(eps, p.nu);
}

namespace {

CutoffSpec rescale(const CutoffSpec& spec, double nu)
{
  switch (kind_of(spec)) {
  case CutoffKind::Exponential: return ExponentialCutoff{std::get<ExponentialCutoff>(spec).eps * nu};
  case CutoffKind::Sharp: return SharpCutoff{std::get<SharpCutoff>(spec).omega_max / nu};
  case CutoffKind::ApShape: {
    const auto& ap = std::get<ApShapeCutoff>(spec);
    return ApShapeCutoff{ap.eps * nu, ap.nu_ref / nu};
  }
  case CutoffKind::None: break;
  }
  return spec;
}

} // namespace

AtomFieldParams to_dimensionless(const AtomFieldParams& p)
{
  return AtomFieldParams{1.0, p.D * p.nu * p.nu, rescale(p.cutoff, p.nu), UnitSystem::Dimensionless};
}

AtomFieldParams from_dimensionless(const AtomFieldParams& p, double nu, UnitSystem units)
{
  // p is expressed in units of 1/p.nu; map to a frame where the frequency equals nu
  const double s = p.nu / nu;
  return AtomFieldParams{nu, p.D * s * s, rescale(p.cutoff, s), units};
}

ValidityReport validity_report(const AtomFieldParams& p, double star_threshold)
{
  const auto* e = std::get_if<ExponentialCutoff>(&p.cutoff);
  if (!e) throw Error(ErrorKind::UnsupportedCutoff, "validity window is defined for the exponential cutoff");
  ValidityReport r;
  r.star_threshold = star_threshold;
  r.lower_bound = std::cbrt(8.0 / (3.0 * pi));
  r.upper_bound = 8.0 / (3.0 * fine_structure);
  r.eps_scaled = p.units == UnitSystem::AtomicHydrogen ? e->eps : e->eps * p.nu / hydrogen_nu();
  r.lower_margin = r.eps_scaled / r.lower_bound;
  r.upper_margin = r.upper_bound / r.eps_scaled;
  r.lamb_ratio = 2.0 * p.D / (e->eps * e->eps * e->eps) / p.nu;
  r.rate_ratio = gamma(p) / p.nu;
  r.window_ok = r.lower_bound < r.eps_scaled && r.eps_scaled < r.upper_bound;
  r.star_ok = r.rate_ratio < star_threshold && r.lamb_ratio < star_threshold;
  return r;
}

} // namespace ww
