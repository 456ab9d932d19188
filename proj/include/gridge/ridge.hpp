#pragma once

#include "gridge/types.hpp"

namespace gridge {

enum class RidgePolicy { fixed, hoerl_kennard, scalar_cv };

/// Diagonal ridge matrix K = diag(k_1, ..., k_p) plus the policy that
/// produced it. All entries must be positive; scalar policy implies they are
/// all equal.
struct RidgeSpec {
  Vector k;
  RidgePolicy policy = RidgePolicy::fixed;

  static RidgeSpec fixed(Vector k);
  static RidgeSpec scalar(double k, Index p, RidgePolicy policy = RidgePolicy::fixed);
  void validate() const;
};

/// Linear restriction H beta = 0; H is q x p with full row rank q < p.
struct Restriction {
  Matrix H;

  explicit Restriction(Matrix h);
  /// Coordinate-selection restriction: rows of the identity at `zero_coords`.
  static Restriction coordinates(const std::vector<Index>& zero_coords, Index p);
  Index q() const { return H.rows(); }
};

struct LinearSolveResult {
  Vector solution;
  double condition_estimate = 0.0;
};

/// Solves (X'X + diag(k)) b = X'Y through an SPD factorization (LLT with an
/// LDLT fallback); valid for p > n as well since K makes the system
/// positive definite. Throws NumericalBreakdown on pivot collapse.
LinearSolveResult solve_ridge_system(const Matrix& X, const Vector& Y, const RidgeSpec& k);

/// Cached factorization of S + K for repeated solves against the same system.
class RidgeSystem {
 public:
  RidgeSystem(const Matrix& X, const RidgeSpec& k);

  Vector solve(const Vector& rhs) const;
  Matrix solve(const Matrix& rhs) const;
  double condition_estimate() const { return cond_; }
  const Matrix& S() const { return S_; }
  Index p() const { return S_.rows(); }

 private:
  Matrix S_;
  Eigen::LDLT<Matrix> ldlt_;
  double cond_ = 0.0;
};

/// Oblique projector M_K = I - S_K^-1 H' (H S_K^-1 H')^-1 H applied to the
/// generalized ridge fit; M_K b satisfies H (M_K b) = 0. Throws
/// SingularRestriction when H S_K^-1 H' is numerically singular.
Matrix restriction_projector(const RidgeSystem& system, const Restriction& restriction);

}  // namespace gridge
