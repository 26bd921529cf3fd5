#pragma once

#include <stdexcept>
#include <string>

namespace optopix {

/// Coarse failure category; the CLI maps each one onto an exit status.
enum class ErrorKind {
  validation,  // bad input, precondition violated
  numerical,   // integration blew up, fit did not converge
  schedule,    // single-beam conflict
};

/// Base exception for everything the toolkit throws on purpose.
///
/// `code()` is a short kebab-case tag (e.g. "invalid-geometry") that is
/// stable enough to match on in scripts.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string code, const std::string& message)
      : std::runtime_error(message), kind_(kind), code_(std::move(code)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& code() const noexcept { return code_; }

 private:
  ErrorKind kind_;
  std::string code_;
};

inline Error validation_error(std::string code, const std::string& message) {
  return Error(ErrorKind::validation, std::move(code), message);
}

inline Error numerical_error(std::string code, const std::string& message) {
  return Error(ErrorKind::numerical, std::move(code), message);
}

}  // namespace optopix
