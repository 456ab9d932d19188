#pragma once

#include <cstdint>
#include <vector>

#include "gridge/estimators_ld.hpp"
#include "gridge/ridge.hpp"
#include "gridge/types.hpp"

namespace gridge {

/// Partitioned design: X_A holds the p-q active predictors (p-q < n, full
/// column rank), X_B the q candidate-nuisance block. Column order is A then
/// B so the restriction H = [0, I_q] applies.
struct PartitionedData {
  Matrix XA;
  Matrix XB;
  Vector Y;

  PartitionedData(Matrix xa, Matrix xb, Vector y);
  Index n() const { return XA.rows(); }
  Index p() const { return XA.cols() + XB.cols(); }
  Index q() const { return XB.cols(); }
  Matrix full_X() const;
};

/// T_n = T_2 / sqrt(2 sigma4_hat tr-hat(Sigma^2_{B|A})); asymptotically
/// standard normal under beta_B = 0. Reject when T_n > z_{1-alpha}.
struct HdTestStat {
  double value = 0.0;
  double T1 = 0.0;
  double T2 = 0.0;
  double sigma2_lse_hat = 0.0;
  double trace_term = 0.0;  // estimate of tr(Sigma^2_{B|A})
  double z_critical = 0.0;  // z_{1-alpha}
  double alpha = 0.05;

  bool accepts() const { return value <= z_critical; }
};

/// paper_literal_sigma switches sigma2 from RSS_A / (n - (p-q)) to RSS_A / q.
HdTestStat hd_test_statistic(const PartitionedData& part, double alpha,
                             bool paper_literal_sigma = false);

struct HdFamily {
  ShrinkageEstimate grr;
  ShrinkageEstimate rgrr;
  HdTestStat test;
  std::vector<ShrinkageEstimate> members;  // LS, PT, SPT, S, PS, IPT

  const ShrinkageEstimate& member(EstimatorKind kind) const;
};

/// Same g-family as the low-dimensional case but driven by T_n against
/// z_{1-alpha}, with the Stein constant replaced by d_star. GRR/RGRR go
/// through the always-invertible S + K system. Throws ZeroTestStat when
/// |T_n| < 1e-12 and a Stein form is requested with d_star > 0.
HdFamily fit_hd_family(const PartitionedData& part, const RidgeSpec& k, double alpha,
                       double omega, double d_star, bool paper_literal_sigma = false);

/// d_star by k-fold CV minimizing the prediction error of the Stein form;
/// ties resolve to the smallest grid value.
double select_d_star(const PartitionedData& part, const RidgeSpec& k, int folds,
                     const std::vector<double>& grid, double alpha,
                     bool paper_literal_sigma = false);

std::vector<double> default_d_star_grid();

/// Per-coordinate ridge penalties for p > n: scalar CV pilot, residual
/// variance with an effective-df divisor, pilot coefficients partially
/// de-shrunk, then k_j = sigma2 / beta_j^2 clamped to [1e-8, 1e8].
RidgeSpec hd_k_selection(const Matrix& X, const Vector& Y, int folds = 5);

struct BoundReport {
  double grr_norm2 = 0.0;
  double grr_bound = 0.0;   // k_min^-1 Y'Y
  double rgrr_ratio = 0.0;  // ||rgrr||^2 / ||grr||^2
  double rgrr_bound = 0.0;  // largest squared singular value of M_K
  double slack_grr = 0.0;
  double slack_rgrr = 0.0;
};

/// Checks ||b_GRR||^2 <= k_(1)^-1 Y'Y and ||b_RGRR||^2 / ||b_GRR||^2 <=
/// sigma_max^2(M_K). Both are theorems, so a violation signals a bug and
/// throws BoundViolation.
BoundReport bound_diagnostics(const Vector& beta_grr, const Vector& beta_rgrr,
                              const RidgeSpec& k, const Vector& Y, const Matrix& MK);

/// Draws Z ~ N(0,1) and evaluates the limiting forms
/// [I - (I - M_K) g(Z)] S_K^-1 S beta per estimator kind, returning the
/// per-coordinate means (one column per kind). z_alpha is the alpha-quantile.
Matrix hd_limit_sample(const Matrix& MK, const Matrix& SKinvS, const Vector& beta, double alpha,
                       double omega, double d, const std::vector<EstimatorKind>& kinds,
                       std::size_t n_draws, std::uint64_t seed);

}  // namespace gridge
