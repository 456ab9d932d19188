#pragma once

#include <string>
#include <vector>

#include "gridge/data.hpp"
#include "gridge/ridge.hpp"
#include "gridge/types.hpp"

namespace gridge {

enum class EstimatorKind { LSE, ORR, GRR, RGRR, LS, PT, SPT, S, PS, IPT };

const char* kind_name(EstimatorKind kind);
bool is_stein_kind(EstimatorKind kind);

struct ShrinkageEstimate {
  Vector beta;
  EstimatorKind kind = EstimatorKind::GRR;
  double g_value = 0.0;    // realized g(test statistic)
  double omega = 0.0;      // LS / SPT intensity
  double d = 0.0;          // Stein constant (S / PS / IPT)
  double test_stat = 0.0;  // W_n (LD) or T_n (HD) that drove g
};

/// Test of H beta = 0: W_n = (H b)'(H S^-1 H')^-1 (H b) / (q sigma2_hat),
/// sigma2_hat = RSS / m, m = n - p. Central F(q, m) under the null.
struct PretestStat {
  double value = 0.0;
  Index q = 0;
  Index m = 0;
  double sigma2_hat = 0.0;
  double critical_value = 0.0;  // upper-alpha F(q, m) quantile
  double alpha = 0.05;

  bool accepts() const { return value <= critical_value; }
};

ShrinkageEstimate fit_lse(const RegressionData& data);
ShrinkageEstimate fit_orr(const RegressionData& data, double k);
ShrinkageEstimate fit_grr(const RegressionData& data, const RidgeSpec& k);
ShrinkageEstimate fit_rgrr(const RegressionData& data, const RidgeSpec& k,
                           const Restriction& restriction);

/// k_j = sigma2 / beta_j^2, clamped to [1e-8, 1e8].
RidgeSpec hoerl_kennard_k(const Vector& pilot_beta, double pilot_sigma2);

PretestStat pretest_statistic(const RegressionData& data, const Restriction& restriction,
                              double alpha);

/// d = (q - 2) m / (q (m + 2)); requires q >= 3.
double stein_d(Index q, Index m);

/// g(.) of the shrinkage family evaluated at test statistic w with the given
/// acceptance threshold. LS: omega; PT: I(w <= c); SPT: omega I(w <= c);
/// S: d/w; PS: d/w + (1 - d/w) I(w <= d); IPT: d/w + (1 - d/w) I(w <= c).
double shrinkage_g(EstimatorKind kind, double w, double critical, double omega, double d);

struct ShrinkageFamily {
  ShrinkageEstimate grr;
  ShrinkageEstimate rgrr;
  PretestStat test;
  std::vector<ShrinkageEstimate> members;  // LS, PT, SPT (+ S, PS, IPT when q >= 3)

  const ShrinkageEstimate& member(EstimatorKind kind) const;
};

/// All shrinkage combinations beta_GRR - (beta_GRR - beta_RGRR) g(W_n).
/// S / PS / IPT are included only when q >= 3; requesting them via member()
/// throws SteinUndefined otherwise.
ShrinkageFamily fit_shrinkage_family(const RegressionData& data, const RidgeSpec& k,
                                     const Restriction& restriction, double alpha, double omega);

/// Scalar ridge parameter by k-fold CV over a log-spaced grid (deterministic
/// positional folds); ties resolve to the smallest k.
RidgeSpec scalar_cv_k(const RegressionData& data, int folds = 5, int grid_size = 40,
                      double log10_min = -2.0, double log10_max = 3.0);

/// Largest omega on {0, 0.05, ..., 1} whose k-fold CV prediction error is
/// within `se_mult` standard errors of the CV minimum. The conservative pick
/// keeps the restricted fit unless the data are decisively against it.
double select_omega_cv(const RegressionData& data, const RidgeSpec& k,
                       const Restriction& restriction, int folds = 5, double se_mult = 3.0);

/// Same rule on an explicit held-out set; used by the scenario harnesses.
double select_omega_validation(const ShrinkageEstimate& grr, const ShrinkageEstimate& rgrr,
                               const RegressionData& fitted_on, const Matrix& X_valid,
                               const Vector& Y_valid, double se_mult = 3.0);

}  // namespace gridge
