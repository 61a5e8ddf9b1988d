#pragma once

#include <stdexcept>
#include <string>

namespace lemorse {

/// Failure categories surfaced by the library. Diagnostics that are not
/// errors (bound violations at loose p, trend flags) are reported in result
/// structs instead.
enum class ErrorKind {
  invalid_argument,
  insufficient_domain,
  blow_up,
  step_control,
  bracket_failure,
  indeterminate_sign,
  not_converged,
  io,
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::invalid_argument: return "invalid_argument";
    case ErrorKind::insufficient_domain: return "insufficient_domain";
    case ErrorKind::blow_up: return "blow_up";
    case ErrorKind::step_control: return "step_control";
    case ErrorKind::bracket_failure: return "bracket_failure";
    case ErrorKind::indeterminate_sign: return "indeterminate_sign";
    case ErrorKind::not_converged: return "not_converged";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace lemorse
