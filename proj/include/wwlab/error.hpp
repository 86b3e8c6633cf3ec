#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ww {

enum class ErrorKind {
  UnsupportedCutoff,
  NegativeFrequency,
  NonpositiveEps,
  DivergentIntegral,
  ToleranceNotMet,
  DivergentKernel,
  StepTooLarge,
  MemoryTooShort,
  SpanTooSmall,
  WindowTooSmall,
  AmplitudeUnderflow,
  NoBracket,
  InvalidArgument,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what);
  ErrorKind kind() const noexcept { return kind_; }
  std::string_view name() const noexcept { return to_string(kind_); }

private:
  ErrorKind kind_;
};

} // namespace ww
