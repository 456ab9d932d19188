#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace gridge {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// Base for all library errors so callers can catch one type.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent user input (CSV, config, dimensions).
struct InputError : Error {
  using Error::Error;
};

// Numerical failure that is not the caller's fault (factorization breakdown).
struct NumericalError : Error {
  using Error::Error;
};

struct ConstantColumn : InputError {
  Index column;
  explicit ConstantColumn(Index j)
      : InputError("column " + std::to_string(j) + " has zero variance"), column(j) {}
};

struct RankDeficient : NumericalError {
  using NumericalError::NumericalError;
};

struct NumericalBreakdown : NumericalError {
  using NumericalError::NumericalError;
};

struct SingularRestriction : NumericalError {
  using NumericalError::NumericalError;
};

struct DegenerateResidual : NumericalError {
  using NumericalError::NumericalError;
};

struct MomentUndefined : Error {
  using Error::Error;
};

struct SteinUndefined : Error {
  using Error::Error;
};

struct ZeroTestStat : NumericalError {
  using NumericalError::NumericalError;
};

struct BoundViolation : Error {
  using Error::Error;
};

struct UnknownScenario : InputError {
  using InputError::InputError;
};

}  // namespace gridge
