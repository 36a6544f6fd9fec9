#pragma once

#include <stdexcept>
#include <string>

namespace sharpib {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A Krylov or factorization-based solve did not reach its tolerance.
class SolverDiverged : public Error {
 public:
  SolverDiverged(const std::string& what, int iterations, double residual)
      : Error(what + " (iterations=" + std::to_string(iterations) +
              ", relative residual=" + std::to_string(residual) + ")"),
        iterations_(iterations),
        residual_(residual) {}

  int iterations() const { return iterations_; }
  double residual() const { return residual_; }

 private:
  int iterations_;
  double residual_;
};

class CflViolation : public Error {
 public:
  using Error::Error;
};

/// det(dX/dxi) <= 0: the parameter-to-reference map of an element is invalid.
class DegenerateElement : public Error {
 public:
  using Error::Error;
};

/// J = det F <= 0 at a quadrature point.
class InvertedElement : public Error {
 public:
  using Error::Error;
};

/// A delta-kernel stencil reaches outside the Eulerian grid.
class PointOutOfDomain : public Error {
 public:
  using Error::Error;
};

class NonPositiveError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace sharpib
