#pragma once

#include <stdexcept>
#include <string>

namespace entconv {

enum class ErrorKind {
  DimensionMismatch,
  NotHermitian,
  DecompositionFailure,
  DomainViolation,
  InfiniteDivergence,
  NonInvertibleKernel,
  NotAState,
  NotPositive,
  NotPpt,
  NotOnBoundary,
  NotInDomain,
  InvalidArgument,
  Unattainable,
};

inline const char *to_string(ErrorKind kind) {
  switch (kind) {
  case ErrorKind::DimensionMismatch: return "dimension mismatch";
  case ErrorKind::NotHermitian: return "not hermitian";
  case ErrorKind::DecompositionFailure: return "decomposition failure";
  case ErrorKind::DomainViolation: return "domain violation";
  case ErrorKind::InfiniteDivergence: return "infinite divergence";
  case ErrorKind::NonInvertibleKernel: return "non-invertible kernel";
  case ErrorKind::NotAState: return "not a state";
  case ErrorKind::NotPositive: return "not positive";
  case ErrorKind::NotPpt: return "not PPT";
  case ErrorKind::NotOnBoundary: return "not on boundary";
  case ErrorKind::NotInDomain: return "not in domain";
  case ErrorKind::InvalidArgument: return "invalid argument";
  case ErrorKind::Unattainable: return "unattainable";
  }
  return "unknown";
}

/// Every failure raised by the library carries one of the kinds above so the
/// CLI can map it onto a structured error object.
class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string &what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind) {}

  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

} // namespace entconv
