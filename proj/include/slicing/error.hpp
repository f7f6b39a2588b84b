#ifndef SLICING_ERROR_HPP
#define SLICING_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace slicing {

/// Closed set of failure kinds. Every precondition the library checks maps
/// to exactly one of these.
enum class ErrorKind {
  BoundsViolation,
  NotModifiable,
  NotAdjacent,
  ReaderUnderflow,
  UseAfterFree,
  DimensionMismatch,
  VerificationFailure,
  InvalidConfig,
  IoFailure,
};

constexpr std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::BoundsViolation: return "BoundsViolation";
    case ErrorKind::NotModifiable: return "NotModifiable";
    case ErrorKind::NotAdjacent: return "NotAdjacent";
    case ErrorKind::ReaderUnderflow: return "ReaderUnderflow";
    case ErrorKind::UseAfterFree: return "UseAfterFree";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::VerificationFailure: return "VerificationFailure";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::IoFailure: return "IoFailure";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace slicing

#endif  // SLICING_ERROR_HPP
