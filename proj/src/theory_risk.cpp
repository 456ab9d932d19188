#include "gridge/theory_risk.hpp"

#include <cmath>

#include "gridge/ncf.hpp"
#include "gridge/stats.hpp"

namespace gridge {

namespace {

double quad(const Vector& v, const Matrix& A) { return v.dot(A * v); }

}  // namespace

RiskContext make_risk_context(Matrix S, Matrix K, Matrix H, Matrix W, Vector beta, double sigma2,
                              Index m, double alpha, double omega) {
  RiskContext ctx;
  ctx.S = std::move(S);
  ctx.K = std::move(K);
  ctx.H = std::move(H);
  ctx.W = std::move(W);
  ctx.beta = std::move(beta);
  ctx.sigma2 = sigma2;
  ctx.m = m;
  ctx.alpha = alpha;
  ctx.omega = omega;

  const Index p = ctx.S.rows();
  if (ctx.K.rows() != p || ctx.W.rows() != p || ctx.beta.size() != p || ctx.H.cols() != p)
    throw InputError("risk context: dimension mismatch");
  if (m < 1) throw InputError("risk context: m must be >= 1");
  Eigen::SelfAdjointEigenSolver<Matrix> wcheck(ctx.W);
  if (wcheck.eigenvalues().minCoeff() <= 0.0)
    throw InputError("risk context: W must be positive definite");

  ctx.Sinv = Eigen::LDLT<Matrix>(ctx.S).solve(Matrix::Identity(p, p));
  ctx.SKinv = Eigen::LDLT<Matrix>(ctx.S + ctx.K).solve(Matrix::Identity(p, p));
  ctx.T = ctx.SKinv * ctx.S;
  const Matrix SKinvHt = ctx.SKinv * ctx.H.transpose();
  const Matrix HSKinvHt = ctx.H * SKinvHt;
  ctx.MK = Matrix::Identity(p, p) -
           SKinvHt * Eigen::FullPivLU<Matrix>(HSKinvHt).solve(ctx.H);
  const Matrix IP = Matrix::Identity(p, p) - ctx.MK;
  ctx.B = ctx.S * ctx.SKinv * ctx.W * IP * ctx.SKinv * ctx.S;
  ctx.C = ctx.S * ctx.SKinv * IP.transpose() * ctx.W * IP * ctx.SKinv * ctx.S;

  const Vector Hb = ctx.H * ctx.beta;
  const Matrix HSinvHt = ctx.H * ctx.Sinv * ctx.H.transpose();
  ctx.delta2 = Hb.dot(Eigen::LDLT<Matrix>(HSinvHt).solve(Hb)) / sigma2;
  if (ctx.delta2 < 0.0 && ctx.delta2 > -1e-12) ctx.delta2 = 0.0;

  const Index q = ctx.H.rows();
  ctx.d = q >= 3 ? stein_d(q, m) : 0.0;
  ctx.critical = f_upper_quantile(alpha, double(q), double(m));
  return ctx;
}

RiskContext with_beta(const RiskContext& ctx, Vector beta) {
  RiskContext out = ctx;
  out.beta = std::move(beta);
  const Vector Hb = out.H * out.beta;
  const Matrix HSinvHt = out.H * out.Sinv * out.H.transpose();
  out.delta2 = Hb.dot(Eigen::LDLT<Matrix>(HSinvHt).solve(Hb)) / out.sigma2;
  if (out.delta2 < 0.0 && out.delta2 > -1e-12) out.delta2 = 0.0;
  return out;
}

namespace {

// One estimator-specific moment E[g^power] at the df1 = q + shift variable.
// The test statistic keeps its divisor q when the chi-square df shifts, so g
// is evaluated at scale = (q + shift)/q times an F_{q+shift, m}(Delta^2)
// variable. Thresholds map to c/scale and inverse moments pick up 1/scale.
double one_moment(EstimatorKind kind, int power, int shift, const RiskContext& ctx) {
  const Index q = ctx.q();
  const int df1 = static_cast<int>(q) + shift;
  const NcfParams params{df1, static_cast<int>(ctx.m), ctx.delta2};
  const double scale = double(q + shift) / double(q);
  const double om = ctx.omega;
  switch (kind) {
    case EstimatorKind::GRR: return 0.0;
    case EstimatorKind::RGRR: return 1.0;
    case EstimatorKind::LS: return std::pow(om, power);
    case EstimatorKind::PT: return ncf_cdf(params, ctx.critical / scale);
    case EstimatorKind::SPT:
      return std::pow(om, power) * ncf_cdf(params, ctx.critical / scale);
    case EstimatorKind::S: {
      const double ds = ctx.d / scale;
      return power == 1 ? ds * ncf_inv_moment(params, 1)
                        : ds * ds * ncf_inv_moment(params, 2);
    }
    case EstimatorKind::PS:
    case EstimatorKind::IPT: {
      const double threshold = kind == EstimatorKind::PS ? ctx.d : ctx.critical;
      const double tc = threshold / scale;
      const double ds = ctx.d / scale;
      if (power == 1) {
        // E[d/w + (1 - d/w) I(w <= t)]
        return ds * ncf_inv_moment(params, 1) + ncf_cdf(params, tc) -
               ds * ncf_truncated_inv_moment(params, 1, tc);
      }
      // g^2 = d^2/w^2 + (1 - d^2/w^2) I(w <= t)
      return ds * ds * ncf_inv_moment(params, 2) + ncf_cdf(params, tc) -
             ds * ds * ncf_truncated_inv_moment(params, 2, tc);
    }
    default: throw InputError("no g-moments for this estimator kind");
  }
}

}  // namespace

GMoments g_moments(EstimatorKind kind, const RiskContext& ctx) {
  if (is_stein_kind(kind) && ctx.q() < 3)
    throw SteinUndefined(std::string(kind_name(kind)) + " requires q >= 3");
  GMoments g;
  g.g2 = one_moment(kind, 1, 2, ctx);
  g.g4 = one_moment(kind, 1, 4, ctx);
  g.gg2 = one_moment(kind, 2, 2, ctx);
  g.gg4 = one_moment(kind, 2, 4, ctx);
  return g;
}

Vector general_shrinkage_bias(const RiskContext& ctx, double g2) {
  const Index p = ctx.p();
  const Matrix IP = Matrix::Identity(p, p) - ctx.MK;
  return (ctx.T - Matrix::Identity(p, p)) * ctx.beta - g2 * (IP * (ctx.T * ctx.beta));
}

double general_shrinkage_risk(const RiskContext& ctx, const GMoments& g) {
  const Index p = ctx.p();
  const Matrix IP = Matrix::Identity(p, p) - ctx.MK;
  const Matrix TmI = ctx.T - Matrix::Identity(p, p);
  const double base = ctx.sigma2 * (ctx.SKinv * ctx.S * ctx.SKinv * ctx.W).trace() +
                      (TmI * ctx.beta).dot(ctx.W * (TmI * ctx.beta));
  const double trB = ctx.sigma2 * (ctx.B * ctx.Sinv).trace();
  const double trC = ctx.sigma2 * (ctx.C * ctx.Sinv).trace();
  const double cross = ctx.beta.dot(ctx.W * (IP * (ctx.T * ctx.beta)));
  return base - 2.0 * trB * g.g2 - 2.0 * quad(ctx.beta, ctx.B) * g.g4 + 2.0 * cross * g.g2 +
         trC * g.gg2 + quad(ctx.beta, ctx.C) * g.gg4;
}

BiasRiskReport estimator_bias_risk(const RiskContext& ctx, EstimatorKind kind) {
  if (kind == EstimatorKind::LSE || kind == EstimatorKind::ORR)
    throw InputError("bias/risk formulas cover the shrinkage family only");
  const GMoments g = g_moments(kind, ctx);
  BiasRiskReport report;
  report.kind = kind;
  report.bias = general_shrinkage_bias(ctx, g.g2);
  report.risk = general_shrinkage_risk(ctx, g);
  return report;
}

std::vector<RiskCurveRow> risk_curve(const RiskContext& ctx, EstimatorKind kind,
                                     const std::vector<double>& delta2_grid) {
  for (std::size_t i = 1; i < delta2_grid.size(); ++i)
    if (delta2_grid[i] < delta2_grid[i - 1])
      throw InputError("risk_curve: grid must be sorted ascending");
  const Index p = ctx.p();
  // restricted-direction decomposition of beta
  const Matrix P = ctx.Sinv * ctx.H.transpose() *
                   Eigen::FullPivLU<Matrix>(ctx.H * ctx.Sinv * ctx.H.transpose()).solve(ctx.H);
  const Vector beta_keep = (Matrix::Identity(p, p) - P) * ctx.beta;
  Vector dir = P * ctx.beta;
  if (dir.norm() < 1e-12) {
    Vector e = Vector::Zero(ctx.q());
    e(0) = 1.0;
    dir = ctx.Sinv * ctx.H.transpose() *
          Eigen::FullPivLU<Matrix>(ctx.H * ctx.Sinv * ctx.H.transpose()).solve(e);
  }
  const Vector Hdir = ctx.H * dir;
  const Matrix HSinvHt = ctx.H * ctx.Sinv * ctx.H.transpose();
  const double unit = Hdir.dot(Eigen::LDLT<Matrix>(HSinvHt).solve(Hdir)) / ctx.sigma2;

  std::vector<RiskCurveRow> rows;
  for (double target : delta2_grid) {
    if (target < 0.0) throw InputError("risk_curve: Delta^2 must be >= 0");
    const double t = unit > 0.0 ? std::sqrt(target / unit) : 0.0;
    const RiskContext local = with_beta(ctx, beta_keep + t * dir);
    const auto report = estimator_bias_risk(local, kind);
    rows.push_back({target, kind, report.risk, report.bias.norm()});
  }
  return rows;
}

}  // namespace gridge
