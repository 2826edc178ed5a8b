#ifndef QMD_ERRORS_HPP
#define QMD_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qmd {

enum class ErrorCode {
  NonHermitian,
  NonPositiveTrace,
  LengthMismatch,
  InvalidEnsemble,
  DegenerateSimplex,
  ConditionPrerequisiteFailed,
  DegenerateAngle,
  NegativeDiscriminant,
  DegenerateBeta,
  DivisionNearZero,
  DegenerateDenominator,
  WrongDimension,
  NumericalInconsistency,
  CertificateFailure,
  WrongN,
};

const char* to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above so
// callers can route on it without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace qmd

#endif  // QMD_ERRORS_HPP
