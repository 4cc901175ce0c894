#pragma once

#include <stdexcept>
#include <string>

namespace arbor {

/// Base of every error raised by the library. The `exit_code` is what the
/// command-line front end returns when the error escapes a command.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what, int exit_code = 3)
      : std::runtime_error(what), exit_code_(exit_code) {}
  int exit_code() const noexcept { return exit_code_; }
  virtual const char* kind() const noexcept { return "error"; }

 private:
  int exit_code_;
};

/// Malformed input text or configuration.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what, std::string path = "")
      : Error(what, 2), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }
  const char* kind() const noexcept override { return "parse"; }

 private:
  std::string path_;
};

/// An operation was called outside its domain (degenerate map, ramified base
/// prime, positive height where height zero is required, ...).
class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& what) : Error(what, 3) {}
  const char* kind() const noexcept override { return "precondition"; }
};

/// A configured resource cap was hit (degree cap, precision cap, step cap).
class ResourceError : public Error {
 public:
  explicit ResourceError(const std::string& what) : Error(what, 4) {}
  const char* kind() const noexcept override { return "resource"; }
};

/// p-adic precision exhausted. Carries the best lower bound established for
/// the quantity that could not be pinned down.
class PrecisionExceeded : public ResourceError {
 public:
  PrecisionExceeded(const std::string& what, long lower_bound)
      : ResourceError(what), lower_bound_(lower_bound) {}
  long lower_bound() const noexcept { return lower_bound_; }
  const char* kind() const noexcept override { return "precision"; }

 private:
  long lower_bound_;
};

}  // namespace arbor
