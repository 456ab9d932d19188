#include "gridge/estimators_hd.hpp"

#include <cmath>
#include <random>

#include "gridge/rng.hpp"
#include "gridge/stats.hpp"

namespace gridge {

PartitionedData::PartitionedData(Matrix xa, Matrix xb, Vector y)
    : XA(std::move(xa)), XB(std::move(xb)), Y(std::move(y)) {
  if (XA.rows() != XB.rows() || XA.rows() != Y.size())
    throw InputError("partitioned data: row counts differ");
  if (XA.cols() >= XA.rows()) throw InputError("partitioned data: need p - q < n");
  if (XB.cols() < 1) throw InputError("partitioned data: empty candidate block");
}

Matrix PartitionedData::full_X() const {
  Matrix X(n(), p());
  X.leftCols(XA.cols()) = XA;
  X.rightCols(XB.cols()) = XB;
  return X;
}

HdTestStat hd_test_statistic(const PartitionedData& part, double alpha,
                             bool paper_literal_sigma) {
  const Index n = part.n();
  const Index pa = part.XA.cols();
  const Index q = part.q();

  Eigen::ColPivHouseholderQR<Matrix> qr(part.XA);
  qr.setThreshold(1e-10);
  if (qr.rank() < pa) throw RankDeficient("active block is rank deficient");

  // residual-maker Q = I - X_A (X_A'X_A)^-1 X_A' applied through the QR
  Matrix SA = Matrix::Zero(pa, pa);
  SA.selfadjointView<Eigen::Lower>().rankUpdate(part.XA.transpose());
  SA = SA.selfadjointView<Eigen::Lower>();
  Eigen::LDLT<Matrix> ldltA(SA);
  const Vector Yt = part.Y - part.XA * ldltA.solve(part.XA.transpose() * part.Y);
  const Matrix XBt = part.XB - part.XA * ldltA.solve(part.XA.transpose() * part.XB);

  const Index N = n - pa;
  const double rssA = Yt.squaredNorm();
  const double sigma2 = paper_literal_sigma ? rssA / double(q) : rssA / double(N);

  const Vector cross = XBt.transpose() * Yt;
  const double T1 = cross.squaredNorm() / double(n);
  const Matrix W = XBt.transpose() * XBt;
  const double trW = W.trace();
  const double T2 = T1 - sigma2 * trW / double(n);

  // tr(Sigma^2_{B|A}) with the (tr W)^2 / N correction; the raw plug-in
  // tr((W/n)^2) overshoots by (tr Sigma)^2-order terms when q is large and
  // drives the empirical size to zero.
  const double bracket = std::max(0.0, W.squaredNorm() - trW * trW / double(N));
  const double t2hat = bracket / (double(N + 2) * double(N - 1));

  HdTestStat stat;
  stat.T1 = T1;
  stat.T2 = T2;
  stat.sigma2_lse_hat = sigma2;
  stat.trace_term = t2hat;
  stat.alpha = alpha;
  stat.z_critical = normal_quantile(1.0 - alpha);
  const double denom = std::sqrt(2.0 * bracket) * sigma2 / double(n);
  stat.value = denom > 1e-300 ? T2 / denom : 0.0;
  return stat;
}

const ShrinkageEstimate& HdFamily::member(EstimatorKind kind) const {
  if (kind == EstimatorKind::GRR) return grr;
  if (kind == EstimatorKind::RGRR) return rgrr;
  for (const auto& est : members)
    if (est.kind == kind) return est;
  throw InputError(std::string(kind_name(kind)) + " not part of this family");
}

HdFamily fit_hd_family(const PartitionedData& part, const RidgeSpec& k, double alpha,
                       double omega, double d_star, bool paper_literal_sigma) {
  if (omega < 0.0 || omega > 1.0) throw InputError("omega must lie in [0, 1]");
  if (d_star < 0.0) throw InputError("d_star must be >= 0");
  HdFamily family;
  const Matrix X = part.full_X();
  RidgeSystem system(X, k);
  family.grr.beta = system.solve(X.transpose() * part.Y);
  family.grr.kind = EstimatorKind::GRR;
  std::vector<Index> tail(static_cast<std::size_t>(part.q()));
  for (Index i = 0; i < part.q(); ++i)
    tail[static_cast<std::size_t>(i)] = part.p() - part.q() + i;
  const Restriction restriction = Restriction::coordinates(tail, part.p());
  const Matrix MK = restriction_projector(system, restriction);
  family.rgrr.beta = MK * family.grr.beta;
  family.rgrr.kind = EstimatorKind::RGRR;
  family.rgrr.g_value = 1.0;
  family.test = hd_test_statistic(part, alpha, paper_literal_sigma);

  const double tn = family.test.value;
  const Vector diff = family.grr.beta - family.rgrr.beta;
  auto stein_g = [&](double threshold) {
    // g = d*/T_n + (1 - d*/T_n) I(T_n <= threshold)
    if (d_star == 0.0) return tn <= threshold ? 1.0 : 0.0;
    if (std::abs(tn) < 1e-12)
      throw ZeroTestStat("T_n is numerically zero; Stein form undefined");
    return shrinkage_g(EstimatorKind::IPT, tn, threshold, omega, d_star);
  };
  for (auto kind : {EstimatorKind::LS, EstimatorKind::PT, EstimatorKind::SPT, EstimatorKind::S,
                    EstimatorKind::PS, EstimatorKind::IPT}) {
    ShrinkageEstimate est;
    est.kind = kind;
    est.omega = omega;
    est.d = is_stein_kind(kind) ? d_star : 0.0;
    est.test_stat = tn;
    switch (kind) {
      case EstimatorKind::LS: est.g_value = omega; break;
      case EstimatorKind::PT: est.g_value = tn <= family.test.z_critical ? 1.0 : 0.0; break;
      case EstimatorKind::SPT:
        est.g_value = omega * (tn <= family.test.z_critical ? 1.0 : 0.0);
        break;
      case EstimatorKind::S:
        if (d_star == 0.0) {
          est.g_value = 0.0;
        } else {
          if (std::abs(tn) < 1e-12)
            throw ZeroTestStat("T_n is numerically zero; Stein form undefined");
          est.g_value = d_star / tn;
        }
        break;
      case EstimatorKind::PS: est.g_value = stein_g(d_star); break;
      case EstimatorKind::IPT: est.g_value = stein_g(family.test.z_critical); break;
      default: break;
    }
    est.beta = family.grr.beta - diff * est.g_value;
    family.members.push_back(std::move(est));
  }
  return family;
}

std::vector<double> default_d_star_grid() {
  std::vector<double> grid;
  for (int i = 0; i <= 12; ++i) grid.push_back(0.25 * i);
  return grid;
}

double select_d_star(const PartitionedData& part, const RidgeSpec& k, int folds,
                     const std::vector<double>& grid, double alpha, bool paper_literal_sigma) {
  if (grid.empty()) throw InputError("select_d_star: empty grid");
  if (grid.size() == 1) return grid.front();
  const Index n = part.n();
  const Index pa = part.XA.cols();
  std::vector<double> sse(grid.size(), 0.0);
  for (int f = 0; f < folds; ++f) {
    std::vector<Index> tr, va;
    for (Index i = 0; i < n; ++i) ((i % folds) == f ? va : tr).push_back(i);
    if (static_cast<Index>(tr.size()) <= pa || va.empty()) continue;
    PartitionedData train(part.XA(tr, Eigen::all), part.XB(tr, Eigen::all), part.Y(tr));
    const Matrix Xt = train.full_X();
    RidgeSystem system(Xt, k);
    const Vector grr = system.solve(Xt.transpose() * train.Y);
    std::vector<Index> tail(static_cast<std::size_t>(part.q()));
    for (Index i = 0; i < part.q(); ++i)
      tail[static_cast<std::size_t>(i)] = part.p() - part.q() + i;
    const Matrix MK = restriction_projector(system, Restriction::coordinates(tail, part.p()));
    const Vector rgrr = MK * grr;
    const auto test = hd_test_statistic(train, alpha, paper_literal_sigma);
    const double tn = test.value;
    Matrix Xv(static_cast<Index>(va.size()), part.p());
    Xv.leftCols(pa) = part.XA(va, Eigen::all);
    Xv.rightCols(part.q()) = part.XB(va, Eigen::all);
    const Vector pred_grr = Xv * grr;
    const Vector pred_diff = Xv * (grr - rgrr);
    for (std::size_t gi = 0; gi < grid.size(); ++gi) {
      const double g = (grid[gi] == 0.0 || std::abs(tn) < 1e-12) ? 0.0 : grid[gi] / tn;
      sse[gi] += (part.Y(va) - (pred_grr - g * pred_diff)).squaredNorm();
    }
  }
  std::size_t best = 0;
  for (std::size_t gi = 1; gi < grid.size(); ++gi)
    if (sse[gi] < sse[best]) best = gi;  // strict: ties keep the smallest d*
  return grid[best];
}

RidgeSpec hd_k_selection(const Matrix& X, const Vector& Y, int folds) {
  const Index n = X.rows();
  const Index p = X.cols();
  RegressionData data(X, Y);
  const RidgeSpec scalar = scalar_cv_k(data, folds);
  const double k0 = scalar.k(0);
  RidgeSystem system(X, scalar);
  const Vector pilot = system.solve(X.transpose() * Y);
  const double rss = (Y - X * pilot).squaredNorm();
  // effective df of the scalar-ridge smoother
  const double df = system.solve(system.S()).trace();
  const double sigma2 = rss / std::max(double(n) - df, 1.0);
  // partially undo the pilot's own shrinkage before the Hoerl-Kennard map;
  // the raw pilot over-penalizes the strong coordinates
  Vector k(p);
  for (Index j = 0; j < p; ++j) {
    const double sjj = system.S()(j, j);
    const double infl = sjj > 0.0 ? std::pow((sjj + k0) / sjj, 0.4) : 1.0;
    const double bj = pilot(j) * infl;
    const double kj = bj != 0.0 ? sigma2 / (bj * bj) : std::numeric_limits<double>::infinity();
    k(j) = std::clamp(kj, 1e-8, 1e8);
  }
  return RidgeSpec{std::move(k), RidgePolicy::hoerl_kennard};
}

BoundReport bound_diagnostics(const Vector& beta_grr, const Vector& beta_rgrr,
                              const RidgeSpec& k, const Vector& Y, const Matrix& MK) {
  BoundReport report;
  report.grr_norm2 = beta_grr.squaredNorm();
  report.grr_bound = Y.squaredNorm() / k.k.minCoeff();
  report.slack_grr = report.grr_bound - report.grr_norm2;

  const double ratio_den = report.grr_norm2;
  report.rgrr_ratio = ratio_den > 0.0 ? beta_rgrr.squaredNorm() / ratio_den : 0.0;
  const double smax = MK.jacobiSvd().singularValues()(0);
  report.rgrr_bound = smax * smax;
  report.slack_rgrr = report.rgrr_bound - report.rgrr_ratio;

  const double tol = 1e-9;
  if (report.slack_grr < -tol * (1.0 + report.grr_bound))
    throw BoundViolation("GRR norm bound violated");
  if (ratio_den > 0.0 && report.slack_rgrr < -tol * (1.0 + report.rgrr_bound))
    throw BoundViolation("RGRR/GRR ratio bound violated");
  return report;
}

Matrix hd_limit_sample(const Matrix& MK, const Matrix& SKinvS, const Vector& beta, double alpha,
                       double omega, double d, const std::vector<EstimatorKind>& kinds,
                       std::size_t n_draws, std::uint64_t seed) {
  const Index p = beta.size();
  const double z_alpha = normal_quantile(alpha);
  const Vector base = SKinvS * beta;
  const Vector restricted = MK * base;
  const Vector diff = base - restricted;
  Matrix means = Matrix::Zero(p, static_cast<Index>(kinds.size()));
  auto gen = substream(seed, 0x68646c696dULL);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (std::size_t i = 0; i < n_draws; ++i) {
    const double z = gauss(gen);
    for (std::size_t ki = 0; ki < kinds.size(); ++ki) {
      const double g = shrinkage_g(kinds[ki], z, z_alpha, omega, d);
      means.col(static_cast<Index>(ki)) += base - g * diff;
    }
  }
  means /= double(n_draws);
  return means;
}

}  // namespace gridge
