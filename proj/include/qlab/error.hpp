#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qlab {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes do not conform.
class DimensionError : public Error {
public:
  using Error::Error;
};

/// An input violates a documented precondition (non-Hermitian, kT <= 0, ...).
class PreconditionError : public Error {
public:
  using Error::Error;
};

/// An iterative method hit its cap without meeting its tolerance.
class NumericalFailure : public Error {
public:
  using Error::Error;
};

/// Target mean energy lies outside the attainable range of the spectrum.
class InfeasibleError : public Error {
public:
  using Error::Error;
};

/// The truncated ladder drops more Boltzmann weight than allowed.
class TruncationError : public Error {
public:
  TruncationError(const std::string& what, std::size_t required_levels)
      : Error(what), required_levels_(required_levels) {}

  /// Level count that would satisfy the truncation rule (0 if above the cap).
  std::size_t required_levels() const noexcept { return required_levels_; }

private:
  std::size_t required_levels_;
};

}  // namespace qlab
