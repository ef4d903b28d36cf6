#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cliff {

enum class ErrorKind {
  InvalidArgument,
  SignatureMismatch,
  GradeOutOfRange,
  SingularElement,
  NoCandidateFound,
  VerificationFailed,
  CaseMismatch,
  NotAdmissible,
  OrthogonalityViolated,
  AxisOutOfRange,
  DegenerateHBasis,
  NotGrade1,
  ShapeMismatch,
  SingularityDetected,
  NotClosed,
  PathDependent,
  SyntaxError,
  EvalError,
  IoError,
};

std::string_view to_string(ErrorKind kind);

// Short %.3g rendering for messages.
std::string format_number(double v);

// Every failure in the library is reported through this type. `value` carries
// the offending number when there is one (a residual, a byte offset, ...).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, double value = 0.0)
      : std::runtime_error(message), kind_(kind), value_(value) {}

  ErrorKind kind() const noexcept { return kind_; }
  double value() const noexcept { return value_; }

  const std::string& stage() const noexcept { return stage_; }
  Error& with_stage(std::string stage) {
    stage_ = std::move(stage);
    return *this;
  }

 private:
  ErrorKind kind_;
  double value_;
  std::string stage_;
};

}  // namespace cliff
