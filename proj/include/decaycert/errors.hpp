#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace decaycert {

enum class ErrorKind {
  InvalidInput,
  NotSectorial,
  NotAccretiveDamping,
  InvalidParams,
  AssumptionCViolated,
  NotPositiveDefinite,
  VerificationFailed,
  NoValidCertificate,
  EigensolverFailure,
  SingularPencil,
  InsufficientData,
  ParseError,
  DimensionMismatch,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::NotSectorial: return "NotSectorial";
    case ErrorKind::NotAccretiveDamping: return "NotAccretiveDamping";
    case ErrorKind::InvalidParams: return "InvalidParams";
    case ErrorKind::AssumptionCViolated: return "AssumptionCViolated";
    case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::VerificationFailed: return "VerificationFailed";
    case ErrorKind::NoValidCertificate: return "NoValidCertificate";
    case ErrorKind::EigensolverFailure: return "EigensolverFailure";
    case ErrorKind::SingularPencil: return "SingularPencil";
    case ErrorKind::InsufficientData: return "InsufficientData";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a machine-readable kind.
/// Parse errors additionally carry the 1-based line number of the offending input.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  Error(ErrorKind kind, const std::string& what, std::size_t line)
      : std::runtime_error(std::string(to_string(kind)) + " (line " + std::to_string(line) +
                           "): " + what),
        kind_(kind),
        line_(line) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::optional<std::size_t> line() const noexcept { return line_; }

 private:
  ErrorKind kind_;
  std::optional<std::size_t> line_;
};

}  // namespace decaycert
