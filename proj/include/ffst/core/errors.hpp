#pragma once

#include <stdexcept>
#include <string>

namespace ffst {

/// Root of all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument or a scenario field was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// The numerics broke down (non-finite values, boundary leakage, ...).
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Too much probability sits where the phase cannot be resolved.
class NodeDominated : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// The additional-phase equation has a genuine divergence at a node.
class NodeSingularity : public NumericalError {
 public:
  NodeSingularity(const std::string& what, double x) : NumericalError(what), x_(x) {}
  double position() const noexcept { return x_; }

 private:
  double x_;
};

/// A requested eigenstate is not bound by the potential on the grid.
class NonConfining : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Energy ordering of eigenstates changed between neighbouring parameter samples.
class LevelCrossing : public NumericalError {
 public:
  LevelCrossing(const std::string& what, double r_lo, double r_hi)
      : NumericalError(what), lo_(r_lo), hi_(r_hi) {}
  double interval_lo() const noexcept { return lo_; }
  double interval_hi() const noexcept { return hi_; }

 private:
  double lo_, hi_;
};

}  // namespace ffst
