#pragma once

#include <stdexcept>
#include <string>

namespace varmech {

/// Base class for all engine errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Mismatched dimensions between points, vectors, covectors or matrices.
struct DimensionError : Error {
  using Error::Error;
};

/// Evaluation requested outside a curve's interval, an invalid interval,
/// or a distribution whose support is not covered by the curves it pairs with.
struct DomainError : Error {
  using Error::Error;
};

/// Adaptive quadrature could not meet the requested tolerance.
struct QuadratureError : Error {
  QuadratureError(const std::string& what, double achieved)
      : Error(what), achieved_tolerance(achieved) {}
  double achieved_tolerance;
};

/// An iterative solver stopped without meeting its tolerance.
struct ConvergenceError : Error {
  ConvergenceError(const std::string& what, double residual)
      : Error(what), final_residual(residual) {}
  double final_residual;
};

/// A matrix required to be invertible (or SPD) was not.
struct SingularMatrixError : Error {
  using Error::Error;
};

/// The velocity Hessian of a Lagrangian is singular or ill-conditioned where
/// the Legendre mapping has to be inverted.
struct HyperregularityError : Error {
  using Error::Error;
};

/// Lexical or syntax error in an expression, with source position.
struct ParseError : Error {
  ParseError(const std::string& what, int line_, int column_)
      : Error(what + " (line " + std::to_string(line_) + ", column " +
              std::to_string(column_) + ")"),
        line(line_),
        column(column_) {}
  int line;
  int column;
};

/// Invalid or incomplete system configuration.
struct ConfigError : Error {
  using Error::Error;
};

/// Malformed input file (CSV trajectories, point tables).
struct IoError : Error {
  using Error::Error;
};

}  // namespace varmech
