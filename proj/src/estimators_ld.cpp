#include "gridge/estimators_ld.hpp"

#include <algorithm>
#include <cmath>

#include "gridge/stats.hpp"

namespace gridge {

const char* kind_name(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::LSE: return "LSE";
    case EstimatorKind::ORR: return "ORR";
    case EstimatorKind::GRR: return "GRR";
    case EstimatorKind::RGRR: return "RGRR";
    case EstimatorKind::LS: return "LS";
    case EstimatorKind::PT: return "PT";
    case EstimatorKind::SPT: return "SPT";
    case EstimatorKind::S: return "S";
    case EstimatorKind::PS: return "PS";
    case EstimatorKind::IPT: return "IPT";
  }
  return "?";
}

bool is_stein_kind(EstimatorKind kind) {
  return kind == EstimatorKind::S || kind == EstimatorKind::PS || kind == EstimatorKind::IPT;
}

ShrinkageEstimate fit_lse(const RegressionData& data) {
  if (data.p() >= data.n()) throw RankDeficient("LSE requires p < n");
  Eigen::ColPivHouseholderQR<Matrix> qr(data.X);
  qr.setThreshold(1e-10);
  if (qr.rank() < data.p()) throw RankDeficient("design matrix is rank deficient");
  ShrinkageEstimate est;
  est.beta = qr.solve(data.Y);
  est.kind = EstimatorKind::LSE;
  return est;
}

ShrinkageEstimate fit_orr(const RegressionData& data, double k) {
  auto result = solve_ridge_system(data.X, data.Y, RidgeSpec::scalar(k, data.p()));
  return {std::move(result.solution), EstimatorKind::ORR, 0.0, 0.0, 0.0, 0.0};
}

ShrinkageEstimate fit_grr(const RegressionData& data, const RidgeSpec& k) {
  auto result = solve_ridge_system(data.X, data.Y, k);
  return {std::move(result.solution), EstimatorKind::GRR, 0.0, 0.0, 0.0, 0.0};
}

ShrinkageEstimate fit_rgrr(const RegressionData& data, const RidgeSpec& k,
                           const Restriction& restriction) {
  RidgeSystem system(data.X, k);
  const Vector beta_grr = system.solve(data.X.transpose() * data.Y);
  const Matrix MK = restriction_projector(system, restriction);
  ShrinkageEstimate est;
  est.beta = MK * beta_grr;
  est.kind = EstimatorKind::RGRR;
  est.g_value = 1.0;
  return est;
}

RidgeSpec hoerl_kennard_k(const Vector& pilot_beta, double pilot_sigma2) {
  Vector k(pilot_beta.size());
  for (Index j = 0; j < k.size(); ++j) {
    const double b2 = pilot_beta(j) * pilot_beta(j);
    const double kj = b2 > 0.0 ? pilot_sigma2 / b2 : std::numeric_limits<double>::infinity();
    k(j) = std::clamp(kj, 1e-8, 1e8);
  }
  RidgeSpec spec{std::move(k), RidgePolicy::hoerl_kennard};
  spec.validate();
  return spec;
}

double stein_d(Index q, Index m) {
  if (q < 3) throw SteinUndefined("Stein constant requires q >= 3");
  return double(q - 2) * double(m) / (double(q) * double(m + 2));
}

PretestStat pretest_statistic(const RegressionData& data, const Restriction& restriction,
                              double alpha) {
  const Index n = data.n();
  const Index p = data.p();
  const Index q = restriction.q();
  if (p >= n) throw RankDeficient("pretest statistic requires p < n");
  const Index m = n - p;

  const ShrinkageEstimate lse = fit_lse(data);
  const double rss = (data.Y - data.X * lse.beta).squaredNorm();
  if (rss <= 1e-12 * std::max(1.0, data.Y.squaredNorm()))
    throw DegenerateResidual("zero residual sum of squares");
  const double sigma2 = rss / double(m);

  Matrix S = Matrix::Zero(p, p);
  S.selfadjointView<Eigen::Lower>().rankUpdate(data.X.transpose());
  S = S.selfadjointView<Eigen::Lower>();
  Eigen::LDLT<Matrix> ldlt(S);
  const Matrix SinvHt = ldlt.solve(Matrix(restriction.H.transpose()));
  const Matrix HSinvHt = restriction.H * SinvHt;
  const Vector Hb = restriction.H * lse.beta;
  const double quad = Hb.dot(Eigen::LDLT<Matrix>(HSinvHt).solve(Hb));

  PretestStat stat;
  stat.value = quad / (double(q) * sigma2);
  stat.q = q;
  stat.m = m;
  stat.sigma2_hat = sigma2;
  stat.alpha = alpha;
  stat.critical_value = f_upper_quantile(alpha, double(q), double(m));
  return stat;
}

double shrinkage_g(EstimatorKind kind, double w, double critical, double omega, double d) {
  const double accept = (w <= critical) ? 1.0 : 0.0;
  switch (kind) {
    case EstimatorKind::GRR: return 0.0;
    case EstimatorKind::RGRR: return 1.0;
    case EstimatorKind::LS: return omega;
    case EstimatorKind::PT: return accept;
    case EstimatorKind::SPT: return omega * accept;
    case EstimatorKind::S: return d / w;
    case EstimatorKind::PS: {
      const double s = d / w;
      return s + (1.0 - s) * ((w <= d) ? 1.0 : 0.0);
    }
    case EstimatorKind::IPT: {
      const double s = d / w;
      return s + (1.0 - s) * accept;
    }
    default: throw InputError("no g for this estimator kind");
  }
}

const ShrinkageEstimate& ShrinkageFamily::member(EstimatorKind kind) const {
  if (kind == EstimatorKind::GRR) return grr;
  if (kind == EstimatorKind::RGRR) return rgrr;
  for (const auto& est : members)
    if (est.kind == kind) return est;
  if (is_stein_kind(kind))
    throw SteinUndefined(std::string(kind_name(kind)) + " requires q >= 3");
  throw InputError(std::string(kind_name(kind)) + " not part of this family");
}

ShrinkageFamily fit_shrinkage_family(const RegressionData& data, const RidgeSpec& k,
                                     const Restriction& restriction, double alpha, double omega) {
  if (omega < 0.0 || omega > 1.0) throw InputError("omega must lie in [0, 1]");
  ShrinkageFamily family;
  RidgeSystem system(data.X, k);
  family.grr.beta = system.solve(data.X.transpose() * data.Y);
  family.grr.kind = EstimatorKind::GRR;
  const Matrix MK = restriction_projector(system, restriction);
  family.rgrr.beta = MK * family.grr.beta;
  family.rgrr.kind = EstimatorKind::RGRR;
  family.rgrr.g_value = 1.0;
  family.test = pretest_statistic(data, restriction, alpha);

  const Vector diff = family.grr.beta - family.rgrr.beta;
  const Index q = restriction.q();
  const double d = q >= 3 ? stein_d(q, family.test.m) : 0.0;

  std::vector<EstimatorKind> kinds{EstimatorKind::LS, EstimatorKind::PT, EstimatorKind::SPT};
  if (q >= 3) {
    kinds.push_back(EstimatorKind::S);
    kinds.push_back(EstimatorKind::PS);
    kinds.push_back(EstimatorKind::IPT);
  }
  for (auto kind : kinds) {
    ShrinkageEstimate est;
    est.kind = kind;
    est.omega = omega;
    est.d = is_stein_kind(kind) ? d : 0.0;
    est.test_stat = family.test.value;
    est.g_value = shrinkage_g(kind, family.test.value, family.test.critical_value, omega, d);
    est.beta = family.grr.beta - diff * est.g_value;
    family.members.push_back(std::move(est));
  }
  return family;
}

namespace {

std::vector<Index> fold_assignment(Index n, int folds) {
  std::vector<Index> fold(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) fold[static_cast<std::size_t>(i)] = i % folds;
  return fold;
}

// Largest grid index whose error is within se_mult standard errors of the
// minimum.
std::size_t conservative_pick(const std::vector<double>& err, const std::vector<double>& se,
                              double se_mult) {
  std::size_t imin = 0;
  for (std::size_t i = 1; i < err.size(); ++i)
    if (err[i] < err[imin]) imin = i;
  const double threshold = err[imin] + se_mult * se[imin];
  std::size_t pick = imin;
  for (std::size_t i = 0; i < err.size(); ++i)
    if (err[i] <= threshold) pick = std::max(pick, i);
  return pick;
}

}  // namespace

RidgeSpec scalar_cv_k(const RegressionData& data, int folds, int grid_size, double log10_min,
                      double log10_max) {
  if (folds < 2) throw InputError("scalar_cv_k: need at least 2 folds");
  const Index n = data.n();
  const Index p = data.p();
  std::vector<double> grid(static_cast<std::size_t>(grid_size));
  for (int i = 0; i < grid_size; ++i)
    grid[static_cast<std::size_t>(i)] =
        std::pow(10.0, log10_min + (log10_max - log10_min) * i / double(grid_size - 1));
  const auto fold = fold_assignment(n, folds);
  std::vector<double> sse(grid.size(), 0.0);
  for (int f = 0; f < folds; ++f) {
    std::vector<Index> tr, va;
    for (Index i = 0; i < n; ++i) (fold[static_cast<std::size_t>(i)] == f ? va : tr).push_back(i);
    if (tr.empty() || va.empty()) continue;
    const Matrix Xt = data.X(tr, Eigen::all);
    const Vector Yt = data.Y(tr);
    const Matrix Xv = data.X(va, Eigen::all);
    const Vector Yv = data.Y(va);
    Matrix S = Matrix::Zero(p, p);
    S.selfadjointView<Eigen::Lower>().rankUpdate(Xt.transpose());
    S = S.selfadjointView<Eigen::Lower>();
    const Vector c = Xt.transpose() * Yt;
    for (std::size_t gi = 0; gi < grid.size(); ++gi) {
      Matrix SK = S;
      SK.diagonal().array() += grid[gi];
      const Vector b = Eigen::LDLT<Matrix>(SK).solve(c);
      sse[gi] += (Yv - Xv * b).squaredNorm();
    }
  }
  std::size_t best = 0;
  for (std::size_t gi = 1; gi < grid.size(); ++gi)
    if (sse[gi] < sse[best]) best = gi;
  return RidgeSpec::scalar(grid[best], p, RidgePolicy::scalar_cv);
}

double select_omega_cv(const RegressionData& data, const RidgeSpec& k,
                       const Restriction& restriction, int folds, double se_mult) {
  const Index n = data.n();
  const auto fold = fold_assignment(n, folds);
  std::vector<double> grid;
  for (int i = 0; i <= 20; ++i) grid.push_back(i / 20.0);
  // per-observation squared errors for every omega
  Matrix sq = Matrix::Zero(n, static_cast<Index>(grid.size()));
  for (int f = 0; f < folds; ++f) {
    std::vector<Index> tr, va;
    for (Index i = 0; i < n; ++i) (fold[static_cast<std::size_t>(i)] == f ? va : tr).push_back(i);
    if (tr.size() < 2 || va.empty()) continue;
    RegressionData train(data.X(tr, Eigen::all), data.Y(tr));
    RidgeSystem system(train.X, k);
    const Vector grr = system.solve(train.X.transpose() * train.Y);
    const Vector rgrr = restriction_projector(system, restriction) * grr;
    const Matrix Xv = data.X(va, Eigen::all);
    const Vector pred_grr = Xv * grr;
    const Vector pred_diff = Xv * (grr - rgrr);
    for (std::size_t gi = 0; gi < grid.size(); ++gi) {
      const Vector resid = data.Y(va) - (pred_grr - grid[gi] * pred_diff);
      for (std::size_t vi = 0; vi < va.size(); ++vi)
        sq(va[vi], static_cast<Index>(gi)) = resid(static_cast<Index>(vi)) *
                                             resid(static_cast<Index>(vi));
    }
  }
  std::vector<double> err(grid.size()), se(grid.size());
  for (std::size_t gi = 0; gi < grid.size(); ++gi) {
    const auto col = sq.col(static_cast<Index>(gi));
    const double mean = col.mean();
    const double var = (col.array() - mean).square().sum() / double(n - 1);
    err[gi] = mean;
    se[gi] = std::sqrt(var / double(n));
  }
  return grid[conservative_pick(err, se, se_mult)];
}

double select_omega_validation(const ShrinkageEstimate& grr, const ShrinkageEstimate& rgrr,
                               const RegressionData& fitted_on, const Matrix& X_valid,
                               const Vector& Y_valid, double se_mult) {
  std::vector<double> grid;
  for (int i = 0; i <= 20; ++i) grid.push_back(i / 20.0);
  const Index nv = X_valid.rows();
  const double a_grr = original_intercept(fitted_on, grr.beta);
  const double a_rgrr = original_intercept(fitted_on, rgrr.beta);
  const Vector pred_grr = (X_valid * to_original_scale(fitted_on, grr.beta)).array() + a_grr;
  const Vector pred_rgrr = (X_valid * to_original_scale(fitted_on, rgrr.beta)).array() + a_rgrr;
  std::vector<double> err(grid.size()), se(grid.size());
  for (std::size_t gi = 0; gi < grid.size(); ++gi) {
    const Vector resid = Y_valid - (pred_grr + grid[gi] * (pred_rgrr - pred_grr));
    const double mean = resid.squaredNorm() / double(nv);
    const double var = (resid.array().square() - mean).square().sum() / double(nv - 1);
    err[gi] = mean;
    se[gi] = std::sqrt(var / double(nv));
  }
  return grid[conservative_pick(err, se, se_mult)];
}

}  // namespace gridge
