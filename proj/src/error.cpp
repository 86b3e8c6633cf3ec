#include "wwlab/error.hpp"

namespace ww {

std::string_view to_string(ErrorKind kind)
{
  switch (kind) {
  case ErrorKind::UnsupportedCutoff: return "UnsupportedCutoff";
  case ErrorKind::NegativeFrequency: return "NegativeFrequency";
  case ErrorKind::NonpositiveEps: return "NonpositiveEps";
  case ErrorKind::DivergentIntegral: return "DivergentIntegral";
  case ErrorKind::ToleranceNotMet: return "ToleranceNotMet";
  case ErrorKind::DivergentKernel: return "DivergentKernel";
  case ErrorKind::StepTooLarge: return "StepTooLarge";
  case ErrorKind::MemoryTooShort: return "MemoryTooShort";
  case ErrorKind::SpanTooSmall: return "SpanTooSmall";
  case ErrorKind::WindowTooSmall: return "WindowTooSmall";
  case ErrorKind::AmplitudeUnderflow: return "AmplitudeUnderflow";
  case ErrorKind::NoBracket: return "NoBracket";
  case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind)
{
}

} // namespace ww
