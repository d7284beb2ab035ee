#pragma once

#include <stdexcept>
#include <string>

namespace gaitlab {

enum class ErrorKind {
  DegenerateInput,
  EmptySilhouette,
  Parameter,
  Io,
  Manifest,
  InsufficientCycles,
  InsufficientGallery,
  DuplicateId,
  Dimension,
  InsufficientClasses,
  Incompatible,
  Format,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DegenerateInput: return "degenerate input";
    case ErrorKind::EmptySilhouette: return "empty silhouette";
    case ErrorKind::Parameter: return "parameter error";
    case ErrorKind::Io: return "I/O error";
    case ErrorKind::Manifest: return "manifest error";
    case ErrorKind::InsufficientCycles: return "insufficient gait cycles";
    case ErrorKind::InsufficientGallery: return "insufficient gallery";
    case ErrorKind::DuplicateId: return "duplicate id";
    case ErrorKind::Dimension: return "dimension mismatch";
    case ErrorKind::InsufficientClasses: return "insufficient classes";
    case ErrorKind::Incompatible: return "incompatible artifacts";
    case ErrorKind::Format: return "format error";
  }
  return "error";
}

/// Every failure raised by the library carries a machine-checkable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace gaitlab
