#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gridge/data.hpp"
#include "gridge/estimators_hd.hpp"
#include "gridge/estimators_ld.hpp"
#include "gridge/penalized.hpp"
#include "gridge/types.hpp"

namespace gridge {

enum class CovKind { ar1, group_block };

/// Simulation design: train/valid/test sizes, coefficients, noise scale and
/// predictor covariance. group_block puts `rho` within consecutive groups of
/// `group_size` among the first `n_groups * group_size` predictors and
/// `between` everywhere else off the diagonal.
struct Scenario {
  std::string name;
  Index n_train = 0;
  Index n_valid = 0;  // 0 means no validation split (HD designs)
  Index n_test = 0;
  Index p = 0;
  Vector beta_true;
  double sigma = 1.0;
  double rho = 0.5;
  CovKind cov = CovKind::ar1;
  Index group_size = 0;
  Index n_groups = 0;
  double between = 0.1;
  int replicates = 250;
  std::uint64_t seed = 2024;

  bool is_hd() const { return p >= n_train; }
  Matrix covariance() const;
};

/// LD1..LD3 / HD1..HD3 designs.
Scenario make_named_scenario(const std::string& name, double rho);

struct ReplicateData {
  RegressionData train;
  Matrix X_valid;
  Vector Y_valid;
  Matrix X_test;
  Vector Y_test;
};

/// Draws one replicate from per-replicate substreams: identical output for a
/// given (seed, rep_index) regardless of evaluation order.
ReplicateData generate_replicate(const Scenario& scn, int rep_index);

struct MetricRow {
  std::string estimator;
  double mse_y = 0.0;
  double mse_beta = 0.0;
  double pe = 0.0;
  double rmse_vs_benchmark = 0.0;  // MSE_y(benchmark) / MSE_y(row)
  double se_mse_y = 0.0;
  double se_mse_beta = 0.0;
  double se_pe = 0.0;
};

struct SweepRow {
  double delta_star = 0.0;
  std::string estimator;
  double rmse = 0.0;  // MSE_beta(GRR) / MSE_beta(estimator)
};

/// Figure-style sweep: beta = (1_{p-q}, Delta*, 0_{q-1}), RMSE of estimation
/// error against the GRR benchmark at each grid value.
std::vector<SweepRow> delta_sweep(const Scenario& base, const std::vector<double>& delta_grid,
                                  double alpha = 0.05);

/// Default sweep design (n = 50 low-dimensional configuration).
Scenario default_sweep_scenario();

/// Full comparison table for a named scenario: shrinkage family plus LSE
/// (p < n only) and the seven penalized competitors. LD designs tune on the
/// validation split; HD designs tune by 5-fold CV with the one-standard-error
/// rule for the penalized paths.
std::vector<MetricRow> run_table_scenario(const std::string& name, double rho,
                                          int replicates_override = 0,
                                          std::uint64_t seed = 2024, double alpha = 0.05);

struct BootstrapOptions {
  int B = 250;
  int folds = 10;
  std::uint64_t seed = 2024;
  double alpha = 0.05;
  double train_fraction = 0.7;
  bool resample = true;  // false: single deterministic evaluation of the data
};

/// Case-resampling evaluation: per replicate resample rows, split train/test,
/// fit every estimator with CV tuning on the train part, and score MSE_y and
/// MSE_beta against the full-data GRR fit (pseudo-truth) plus the prediction
/// error on the test part. Relative columns are ratios against GRR.
std::vector<MetricRow> bootstrap_evaluate(const RegressionData& data,
                                          const std::vector<Index>& submodel_keep,
                                          const BootstrapOptions& options);

/// Zero set of the lasso fit at lambda_1se: the coordinates H should restrict.
std::vector<Index> select_submodel_1se(const RegressionData& data, int folds = 10);

}  // namespace gridge
