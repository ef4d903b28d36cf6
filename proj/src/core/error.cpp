#include "cliff/error.hpp"

#include <cstdio>

#include "cliff/signature.hpp"

namespace cliff {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::SignatureMismatch: return "SignatureMismatch";
    case ErrorKind::GradeOutOfRange: return "GradeOutOfRange";
    case ErrorKind::SingularElement: return "SingularElement";
    case ErrorKind::NoCandidateFound: return "NoCandidateFound";
    case ErrorKind::VerificationFailed: return "VerificationFailed";
    case ErrorKind::CaseMismatch: return "CaseMismatch";
    case ErrorKind::NotAdmissible: return "NotAdmissible";
    case ErrorKind::OrthogonalityViolated: return "OrthogonalityViolated";
    case ErrorKind::AxisOutOfRange: return "AxisOutOfRange";
    case ErrorKind::DegenerateHBasis: return "DegenerateHBasis";
    case ErrorKind::NotGrade1: return "NotGrade1";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::SingularityDetected: return "SingularityDetected";
    case ErrorKind::NotClosed: return "NotClosed";
    case ErrorKind::PathDependent: return "PathDependent";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::EvalError: return "EvalError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

Signature make_signature(int p, int q, ScalarField field) {
  if (p < 0 || q < 0 || p + q < 1 || p + q > kMaxGenerators) {
    throw Error(ErrorKind::InvalidArgument,
                "signature (" + std::to_string(p) + "," + std::to_string(q) +
                    ") outside 1 <= p+q <= " + std::to_string(kMaxGenerators));
  }
  return Signature{p, q, field};
}

std::string to_string(const Signature& sig) {
  return std::string(sig.is_complex() ? "ClC(" : "Cl(") + std::to_string(sig.p) + "," +
         std::to_string(sig.q) + ")";
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

}  // namespace cliff
