#pragma once

#include <string>
#include <vector>

#include "gridge/types.hpp"

namespace gridge {

enum class PenaltyFamily { ridge, lasso, alasso, scad, mcp, enet, mnet };

const char* family_name(PenaltyFamily family);
PenaltyFamily family_from_name(const std::string& name);

/// Penalized least squares spec. The objective is
///   (1/2n) ||Y - X b||^2 + lambda * P(b)   [+ lambda2 ||b||^2 for enet/mnet]
/// with P the family penalty; lambda values are reported in this 1/(2n)
/// convention. gamma is the concavity parameter (SCAD a > 2, default 3.7;
/// MCP gamma > 0, default 3).
struct PenaltySpec {
  PenaltyFamily family = PenaltyFamily::lasso;
  double lambda = 0.0;
  double lambda2 = 0.0;       // enet / mnet ridge part
  double gamma = 0.0;         // 0 means family default
  Vector weights;             // alasso; empty means all ones

  double effective_gamma() const;
  void validate(Index p) const;
};

struct PenalizedOptions {
  double tol = 1e-7;
  int max_sweeps = 100000;
  bool track_objective = false;  // record the objective after every sweep
};

struct PenalizedFit {
  Vector beta;
  bool converged = true;
  int sweeps = 0;
  std::vector<double> objective_trace;  // filled when track_objective
};

/// Cyclic coordinate descent with fixed 1..p cycling order. Columns are
/// rescaled internally to unit second moment; the penalty applies to the
/// rescaled coefficients. Non-convergence returns the best iterate with
/// converged = false.
PenalizedFit fit_penalized(const Matrix& X, const Vector& Y, const PenaltySpec& spec,
                           const PenalizedOptions& options = {},
                           const Vector* warm_start = nullptr);

/// Objective value in the solver's convention (for monotonicity checks).
double penalized_objective(const Matrix& X, const Vector& Y, const PenaltySpec& spec,
                           const Vector& beta);

/// Internal column scales s_j = ||X_j|| / sqrt(n) used by the solver.
Vector penalized_column_scale(const Matrix& X);

/// Smallest lambda with an all-zero solution (from ||X'Y||_inf, per family).
double lambda_max_for(const Matrix& X, const Vector& Y, const PenaltySpec& spec);

struct PathResult {
  Vector lambdas;     // descending
  Matrix coefs;       // p x n_lambda, original scale
  Vector cv_error;    // mean CV prediction error per lambda
  Vector cv_se;       // standard error over folds
  Index idx_min = 0;
  Index idx_1se = 0;
  double lambda_min = 0.0;
  double lambda_1se = 0.0;
};

/// Log-spaced path from lambda_max down to 1e-3 lambda_max with warm starts
/// and k-fold CV (deterministic positional folds). For enet/mnet the ridge
/// part is tied to the path: lambda2 = lambda2_ratio * lambda.
PathResult lambda_path(const Matrix& X, const Vector& Y, PenaltySpec spec, int n_lambda = 50,
                       int folds = 5, double lambda2_ratio = 1.0);

/// w_j = 1 / |pilot_j|^gamma clamped to [1e-8, 1e8]; gamma = 0 gives lasso.
Vector alasso_weights(const Vector& pilot_beta, double gamma);

}  // namespace gridge
