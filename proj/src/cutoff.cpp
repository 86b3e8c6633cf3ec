#include "wwlab/cutoff.hpp"

#include <limits>

namespace ww {

CutoffSpec exponential_cutoff(double eps)
{
  CutoffSpec s = ExponentialCutoff{eps};
  validate(s);
  return s;
}

CutoffSpec sharp_cutoff(double omega_max)
{
  CutoffSpec s = SharpCutoff{omega_max};
  validate(s);
  return s;
}

CutoffSpec ap_shape_cutoff(double eps, double nu_ref)
{
  CutoffSpec s = ApShapeCutoff{eps, nu_ref};
  validate(s);
  return s;
}

void validate(const CutoffSpec& spec)
{
  if (const auto* e = std::get_if<ExponentialCutoff>(&spec)) {
    if (!(e->eps > 0)) throw Error(ErrorKind::NonpositiveEps, "exponential cutoff needs eps > 0");
  } else if (const auto* s = std::get_if<SharpCutoff>(&spec)) {
    if (!(s->omega_max > 0)) throw Error(ErrorKind::InvalidArgument, "sharp cutoff needs omega_max > 0");
  } else if (const auto* a = std::get_if<ApShapeCutoff>(&spec)) {
    if (!(a->eps > 0)) throw Error(ErrorKind::NonpositiveEps, "ap-shape cutoff needs eps > 0");
    if (!(a->nu_ref > 0)) throw Error(ErrorKind::InvalidArgument, "ap-shape cutoff needs nu_ref > 0");
  }
}

CutoffKind kind_of(const CutoffSpec& spec) { return static_cast<CutoffKind>(spec.index()); }

std::string_view kind_name(CutoffKind kind)
{
  switch (kind) {
  case CutoffKind::None: return "none";
  case CutoffKind::Exponential: return "exponential";
  case CutoffKind::Sharp: return "sharp";
  case CutoffKind::ApShape: return "ap_shape";
  }
  return "none";
}

CutoffKind parse_kind(std::string_view name)
{
  if (name == "none") return CutoffKind::None;
  if (name == "exponential" || name == "exp") return CutoffKind::Exponential;
  if (name == "sharp") return CutoffKind::Sharp;
  if (name == "ap_shape" || name == "ap-shape" || name == "ap") return CutoffKind::ApShape;
  throw Error(ErrorKind::UnsupportedCutoff, "unknown cutoff kind '" + std::string(name) + "'");
}

bool is_integrable(const CutoffSpec& spec) { return !std::holds_alternative<NoCutoff>(spec); }

double time_scale(const CutoffSpec& spec)
{
  switch (kind_of(spec)) {
  case CutoffKind::Exponential: return std::get<ExponentialCutoff>(spec).eps;
  case CutoffKind::ApShape: return std::get<ApShapeCutoff>(spec).eps;
  case CutoffKind::Sharp: return 1.0 / std::get<SharpCutoff>(spec).omega_max;
  case CutoffKind::None: break;
  }
  return 0.0;
}

int low_frequency_exponent(const CutoffSpec& spec)
{
  return std::holds_alternative<ApShapeCutoff>(spec) ? 1 : 3;
}

double weight_tail(const CutoffSpec& spec, double x)
{
  x = std::max(x, 0.0);
  switch (kind_of(spec)) {
  case CutoffKind::None: return std::numeric_limits<double>::infinity();
  case CutoffKind::Exponential: {
    // upper incomplete gamma: int_x^inf w^3 e^{-eps w} dw
    const double eps = std::get<ExponentialCutoff>(spec).eps;
    const double y = eps * x;
    const double e4 = eps * eps * eps * eps;
    return std::exp(-y) * (6.0 + y * (6.0 + y * (3.0 + y))) / e4;
  }
  case CutoffKind::Sharp: {
    const double om = std::get<SharpCutoff>(spec).omega_max;
    return x >= om ? 0.0 : 0.25 * (om * om * om * om - x * x * x * x);
  }
  case CutoffKind::ApShape: {
    const auto& ap = std::get<ApShapeCutoff>(spec);
    const double d = 1.0 + ap.eps * ap.eps * x * x;
    return ap.nu_ref * ap.nu_ref / (6.0 * ap.eps * ap.eps * d * d * d);
  }
  }
  return 0.0;
}

double weight_total(const CutoffSpec& spec) { return weight_tail(spec, 0.0); }

} // namespace ww
