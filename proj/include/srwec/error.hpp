#pragma once

#include <stdexcept>
#include <string>

namespace srwec {

/// Coarse failure class; the CLI maps it onto process exit codes.
enum class ErrorKind {
  Usage,       // bad invocation or configuration syntax
  Validation,  // inputs violate a documented invariant
  Data,        // malformed or insufficient input data
  Numeric,     // a numerical procedure could not produce a trustworthy result
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string code, const std::string& message)
      : std::runtime_error(message), kind_(kind), code_(std::move(code)) {}

  ErrorKind kind() const noexcept { return kind_; }
  /// Stable machine-readable tag, e.g. "resolution_error".
  const std::string& code() const noexcept { return code_; }

 private:
  ErrorKind kind_;
  std::string code_;
};

struct UsageError : Error {
  explicit UsageError(const std::string& m) : Error(ErrorKind::Usage, "usage_error", m) {}
};
struct ValidationError : Error {
  explicit ValidationError(const std::string& m)
      : Error(ErrorKind::Validation, "validation_error", m) {}
};
struct DomainError : Error {
  explicit DomainError(const std::string& m) : Error(ErrorKind::Validation, "domain_error", m) {}
};
struct SizeError : Error {
  explicit SizeError(const std::string& m) : Error(ErrorKind::Validation, "size_error", m) {}
};
struct FormatError : Error {
  explicit FormatError(const std::string& m) : Error(ErrorKind::Data, "format_error", m) {}
};
struct EmptyInputError : Error {
  explicit EmptyInputError(const std::string& m) : Error(ErrorKind::Data, "empty_input", m) {}
};
struct ResolutionError : Error {
  explicit ResolutionError(const std::string& m)
      : Error(ErrorKind::Numeric, "resolution_error", m) {}
};
struct StabilityError : Error {
  explicit StabilityError(const std::string& m)
      : Error(ErrorKind::Numeric, "stability_error", m) {}
};
struct NumericError : Error {
  explicit NumericError(const std::string& m) : Error(ErrorKind::Numeric, "numeric_error", m) {}
};
struct ConditioningError : Error {
  ConditioningError(int harmonic, const std::string& m)
      : Error(ErrorKind::Numeric, "conditioning_error", m), harmonic_(harmonic) {}
  int harmonic() const noexcept { return harmonic_; }

 private:
  int harmonic_;
};

}  // namespace srwec
