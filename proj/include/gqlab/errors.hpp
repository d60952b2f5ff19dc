#pragma once

#include <stdexcept>
#include <string>

namespace gqlab {

enum class ErrorKind {
  invalid_structure,
  config,
  domain,
  convergence,
  resolution,
  truncation,
  ill_posed_window,
  precondition,
  insufficient_spectrum,
  internal,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& msg)
      : std::runtime_error(msg), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& msg) {
  throw Error(kind, msg);
}

inline const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::invalid_structure: return "invalid-structure";
    case ErrorKind::config: return "config";
    case ErrorKind::domain: return "domain";
    case ErrorKind::convergence: return "convergence";
    case ErrorKind::resolution: return "resolution";
    case ErrorKind::truncation: return "truncation";
    case ErrorKind::ill_posed_window: return "ill-posed-window";
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::insufficient_spectrum: return "insufficient-spectrum";
    case ErrorKind::internal: return "internal";
  }
  return "unknown";
}

}  // namespace gqlab
