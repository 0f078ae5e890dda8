#pragma once

#include <stdexcept>
#include <string>

namespace capillar {

enum class ErrorKind {
  NonPositiveVolume,
  NonPositiveTemperature,
  DegenerateInterfaceEos,
  InvalidParameter,
  InvalidState,
  ZeroMixtureEntropy,
  ClosureInconsistent,
  MaxIterExceeded,
  SingularJacobian,
  InfeasibleRegion,
  ComplexEigenvalues,
  ConvergenceFailure,
  CflViolation,
  StateInvalid,
  SubcycleLimit,
  ConfigInvalid,
  IoError,
};

const char* to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

}  // namespace capillar
