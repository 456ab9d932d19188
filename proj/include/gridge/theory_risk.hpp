#pragma once

#include <vector>

#include "gridge/estimators_ld.hpp"
#include "gridge/ridge.hpp"
#include "gridge/types.hpp"

namespace gridge {

/// Everything the exact bias/risk formulas need: the design moment matrix
/// S = X'X, the ridge matrix K, the weight W of the quadratic loss, the true
/// coefficients and noise variance, and the test-statistic geometry (q, m,
/// alpha). Derived quantities are computed once at construction.
struct RiskContext {
  Matrix S;
  Matrix K;
  Matrix W;
  Matrix H;
  Vector beta;
  double sigma2 = 1.0;
  Index m = 1;  // residual degrees of freedom n - p
  double alpha = 0.05;
  double omega = 0.5;

  // derived
  Matrix Sinv;
  Matrix SKinv;
  Matrix T;    // S_K^-1 S
  Matrix MK;   // I - S_K^-1 H'(H S_K^-1 H')^-1 H
  Matrix B;    // S S_K^-1 W (I - M_K) S_K^-1 S
  Matrix C;    // S S_K^-1 (I - M_K)' W (I - M_K) S_K^-1 S
  double delta2 = 0.0;  // (H beta)'(H S^-1 H')^-1 (H beta) / sigma2
  double d = 0.0;       // (q-2) m / (q (m+2)), 0 when q < 3
  double critical = 0.0;

  Index p() const { return S.rows(); }
  Index q() const { return H.rows(); }
};

RiskContext make_risk_context(Matrix S, Matrix K, Matrix H, Matrix W, Vector beta, double sigma2,
                              Index m, double alpha = 0.05, double omega = 0.5);

/// Replaces beta (and the derived delta2) keeping all matrices.
RiskContext with_beta(const RiskContext& ctx, Vector beta);

/// Expectations of g and g^2 evaluated at the df-shifted test-statistic
/// variables ((q+2)/q) F_{q+2,m}(Delta^2) and ((q+4)/q) F_{q+4,m}(Delta^2).
struct GMoments {
  double g2 = 0.0;   // E[g]  at q+2
  double g4 = 0.0;   // E[g]  at q+4
  double gg2 = 0.0;  // E[g^2] at q+2
  double gg4 = 0.0;  // E[g^2] at q+4
};

GMoments g_moments(EstimatorKind kind, const RiskContext& ctx);

/// (S_K^-1 S - I) beta - (I - M_K) S_K^-1 S beta * E[g].
Vector general_shrinkage_bias(const RiskContext& ctx, double g2);

/// sigma2 tr(S_K^-1 S S_K^-1 W) + beta'(T-I)'W(T-I)beta
///   - 2 sigma2 tr(B S^-1) E[g]_2 - 2 beta'B beta E[g]_4
///   + 2 beta'W(I-M_K)T beta E[g]_2
///   + sigma2 tr(C S^-1) E[g^2]_2 + beta'C beta E[g^2]_4.
/// The trace terms carry the sigma2 S^-1 covariance weight.
double general_shrinkage_risk(const RiskContext& ctx, const GMoments& g);

struct BiasRiskReport {
  EstimatorKind kind = EstimatorKind::GRR;
  Vector bias;
  double risk = 0.0;
};

BiasRiskReport estimator_bias_risk(const RiskContext& ctx, EstimatorKind kind);

struct RiskCurveRow {
  double delta2 = 0.0;
  EstimatorKind kind = EstimatorKind::GRR;
  double risk = 0.0;
  double bias_norm = 0.0;
};

/// Risk along a Delta^2 grid; beta is rescaled in the restricted direction to
/// hit each grid value (the unrestricted component is kept fixed).
std::vector<RiskCurveRow> risk_curve(const RiskContext& ctx, EstimatorKind kind,
                                     const std::vector<double>& delta2_grid);

}  // namespace gridge
