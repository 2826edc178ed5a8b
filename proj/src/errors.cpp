#include "qmd/errors.hpp"

namespace qmd {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonHermitian: return "NonHermitian";
    case ErrorCode::NonPositiveTrace: return "NonPositiveTrace";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::InvalidEnsemble: return "InvalidEnsemble";
    case ErrorCode::DegenerateSimplex: return "DegenerateSimplex";
    case ErrorCode::ConditionPrerequisiteFailed: return "ConditionPrerequisiteFailed";
    case ErrorCode::DegenerateAngle: return "DegenerateAngle";
    case ErrorCode::NegativeDiscriminant: return "NegativeDiscriminant";
    case ErrorCode::DegenerateBeta: return "DegenerateBeta";
    case ErrorCode::DivisionNearZero: return "DivisionNearZero";
    case ErrorCode::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorCode::WrongDimension: return "WrongDimension";
    case ErrorCode::NumericalInconsistency: return "NumericalInconsistency";
    case ErrorCode::CertificateFailure: return "CertificateFailure";
    case ErrorCode::WrongN: return "WrongN";
  }
  return "Unknown";
}

}  // namespace qmd
