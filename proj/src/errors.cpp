#include "capillar/errors.hpp"

namespace capillar {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NonPositiveVolume: return "NonPositiveVolume";
    case ErrorKind::NonPositiveTemperature: return "NonPositiveTemperature";
    case ErrorKind::DegenerateInterfaceEos: return "DegenerateInterfaceEos";
    case ErrorKind::InvalidParameter: return "InvalidParameter";
    case ErrorKind::InvalidState: return "InvalidState";
    case ErrorKind::ZeroMixtureEntropy: return "ZeroMixtureEntropy";
    case ErrorKind::ClosureInconsistent: return "ClosureInconsistent";
    case ErrorKind::MaxIterExceeded: return "MaxIterExceeded";
    case ErrorKind::SingularJacobian: return "SingularJacobian";
    case ErrorKind::InfeasibleRegion: return "InfeasibleRegion";
    case ErrorKind::ComplexEigenvalues: return "ComplexEigenvalues";
    case ErrorKind::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorKind::CflViolation: return "CflViolation";
    case ErrorKind::StateInvalid: return "StateInvalid";
    case ErrorKind::SubcycleLimit: return "SubcycleLimit";
    case ErrorKind::ConfigInvalid: return "ConfigInvalid";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace capillar
