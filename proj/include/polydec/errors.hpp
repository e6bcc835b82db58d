#pragma once

#include <stdexcept>
#include <string>

namespace polydec {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised where an operation needs nonzero curvature (phi'' not identically 0).
class LinearPhaseError : public Error {
 public:
  using Error::Error;
};

class RootIsolationError : public Error {
 public:
  RootIsolationError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class PreconditionViolated : public Error {
 public:
  using Error::Error;
};

class NotAdmissibleCell : public Error {
 public:
  using Error::Error;
};

class IncompatibleShear : public Error {
 public:
  using Error::Error;
};

class NyquistViolation : public Error {
 public:
  using Error::Error;
};

class QuadratureBudgetExceeded : public Error {
 public:
  QuadratureBudgetExceeded(const std::string& what, double bound)
      : Error(what), bound_(bound) {}
  double bound() const noexcept { return bound_; }

 private:
  double bound_;
};

/// Work or memory limit hit (enumeration size, lattice size).
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class SchemaViolation : public Error {
 public:
  using Error::Error;
};

class InvariantBreach : public Error {
 public:
  using Error::Error;
};

}  // namespace polydec
