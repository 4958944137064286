#pragma once

#include <stdexcept>
#include <string>

namespace hr {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the domain of an operation (negative distance, bad site index, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Objects built from different geometries were combined.
class ConsistencyError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A Hilbert-space or truncated-space dimension exceeds its configured cap.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure failed (root search, eigensolver, integrator).
class NumericalError : public Error {
 public:
  using Error::Error;
};

class RootNotFoundError : public NumericalError {
 public:
  RootNotFoundError(const std::string& what, double lo, double hi)
      : NumericalError(what), lo_(lo), hi_(hi) {}
  double bracket_lo() const noexcept { return lo_; }
  double bracket_hi() const noexcept { return hi_; }

 private:
  double lo_;
  double hi_;
};

class EigenSolverError : public NumericalError {
 public:
  EigenSolverError(const std::string& what, std::string fingerprint)
      : NumericalError(what + " [" + fingerprint + "]"), fingerprint_(std::move(fingerprint)) {}
  const std::string& fingerprint() const noexcept { return fingerprint_; }

 private:
  std::string fingerprint_;
};

/// Separable-mode matching could not assign a unique mode to every block eigenvalue.
class DegeneracyAmbiguityError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class IntegrationError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Configuration document rejected; `path()` is the dotted key path ("geometry.n_atoms").
class ConfigError : public Error {
 public:
  ConfigError(std::string path, const std::string& what)
      : Error(path.empty() ? what : path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace hr
