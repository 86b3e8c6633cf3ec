#pragma once

#include <cmath>
#include <string>
#include <string_view>
#include <variant>

#include "wwlab/error.hpp"

namespace ww {

struct NoCutoff {};

struct ExponentialCutoff {
  double eps;
};

// Indicator on the closed interval omega <= omega_max.
struct SharpCutoff {
  double omega_max;
};

// nu_ref is a fixed constant of the shape, not the running transition frequency.
struct ApShapeCutoff {
  double eps;
  double nu_ref;
};

using CutoffSpec = std::variant<NoCutoff, ExponentialCutoff, SharpCutoff, ApShapeCutoff>;

enum class CutoffKind { None, Exponential, Sharp, ApShape };

CutoffSpec exponential_cutoff(double eps);
CutoffSpec sharp_cutoff(double omega_max);
CutoffSpec ap_shape_cutoff(double eps, double nu_ref);

// Throws NonpositiveEps / InvalidArgument when parameters are out of range.
void validate(const CutoffSpec& spec);

CutoffKind kind_of(const CutoffSpec& spec);
std::string_view kind_name(CutoffKind kind);
CutoffKind parse_kind(std::string_view name);

bool is_integrable(const CutoffSpec& spec);

// Kernel decay time (eps) or inverse band edge for the sharp cutoff.
double time_scale(const CutoffSpec& spec);

template <typename Scalar>
Scalar spectral_weight(const CutoffSpec& spec, Scalar omega)
{
  using std::exp;
  if (omega < Scalar(0))
    throw Error(ErrorKind::NegativeFrequency, "spectral weight requested at negative frequency");
  const Scalar w3 = omega * omega * omega;
  switch (spec.index()) {
  case 0: return w3;
  case 1: return w3 * exp(-Scalar(std::get<ExponentialCutoff>(spec).eps) * omega);
  case 2: return omega <= Scalar(std::get<SharpCutoff>(spec).omega_max) ? w3 : Scalar(0);
  default: {
    const auto& ap = std::get<ApShapeCutoff>(spec);
    const Scalar x = Scalar(ap.eps) * omega;
    const Scalar d = Scalar(1) + x * x;
    const Scalar d2 = d * d;
    return Scalar(ap.nu_ref) * Scalar(ap.nu_ref) * omega / (d2 * d2);
  }
  }
}

int low_frequency_exponent(const CutoffSpec& spec);

// Integral of the weight over [x, inf) and over [0, inf), in closed form.
double weight_tail(const CutoffSpec& spec, double x);
double weight_total(const CutoffSpec& spec);

} // namespace ww
