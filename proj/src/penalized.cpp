#include "gridge/penalized.hpp"

#include <algorithm>
#include <cmath>

namespace gridge {

const char* family_name(PenaltyFamily family) {
  switch (family) {
    case PenaltyFamily::ridge: return "Ridge";
    case PenaltyFamily::lasso: return "LASSO";
    case PenaltyFamily::alasso: return "ALASSO";
    case PenaltyFamily::scad: return "SCAD";
    case PenaltyFamily::mcp: return "MCP";
    case PenaltyFamily::enet: return "ENET";
    case PenaltyFamily::mnet: return "MNET";
  }
  return "?";
}

PenaltyFamily family_from_name(const std::string& name) {
  std::string low;
  for (char c : name) low.push_back(static_cast<char>(std::tolower(c)));
  if (low == "ridge") return PenaltyFamily::ridge;
  if (low == "lasso") return PenaltyFamily::lasso;
  if (low == "alasso") return PenaltyFamily::alasso;
  if (low == "scad") return PenaltyFamily::scad;
  if (low == "mcp") return PenaltyFamily::mcp;
  if (low == "enet") return PenaltyFamily::enet;
  if (low == "mnet") return PenaltyFamily::mnet;
  throw InputError("unknown penalty family: " + name);
}

double PenaltySpec::effective_gamma() const {
  if (gamma > 0.0) return gamma;
  if (family == PenaltyFamily::scad) return 3.7;
  if (family == PenaltyFamily::mcp || family == PenaltyFamily::mnet) return 3.0;
  return 0.0;
}

void PenaltySpec::validate(Index p) const {
  if (lambda < 0.0 || lambda2 < 0.0) throw InputError("penalty: lambda must be >= 0");
  if (family == PenaltyFamily::scad && effective_gamma() <= 2.0)
    throw InputError("SCAD requires a > 2");
  if ((family == PenaltyFamily::mcp || family == PenaltyFamily::mnet) &&
      effective_gamma() <= 0.0)
    throw InputError("MCP requires gamma > 0");
  if (weights.size() > 0) {
    if (weights.size() != p) throw InputError("penalty: weight length != p");
    if ((weights.array() <= 0.0).any()) throw InputError("penalty: weights must be positive");
  }
}

namespace {

inline double soft(double z, double t) {
  if (z > t) return z - t;
  if (z < -t) return z + t;
  return 0.0;
}

double scad_penalty(double t, double lambda, double a) {
  t = std::abs(t);
  if (t <= lambda) return lambda * t;
  if (t <= a * lambda)
    return (2.0 * a * lambda * t - t * t - lambda * lambda) / (2.0 * (a - 1.0));
  return (a + 1.0) * lambda * lambda / 2.0;
}

double mcp_penalty(double t, double lambda, double g) {
  t = std::abs(t);
  if (t <= g * lambda) return lambda * t - t * t / (2.0 * g);
  return g * lambda * lambda / 2.0;
}

// Univariate minimizer of (1/2)(b - z)^2 + penalty(b) at unit curvature.
double update(PenaltyFamily family, double z, double lambda, double lambda2, double gamma,
              double weight) {
  switch (family) {
    case PenaltyFamily::ridge: return z / (1.0 + 2.0 * lambda);
    case PenaltyFamily::lasso: return soft(z, lambda);
    case PenaltyFamily::alasso: return soft(z, lambda * weight);
    case PenaltyFamily::enet: return soft(z, lambda) / (1.0 + 2.0 * lambda2);
    case PenaltyFamily::scad: {
      const double a = gamma;
      if (std::abs(z) <= 2.0 * lambda) return soft(z, lambda);
      if (std::abs(z) <= a * lambda)
        return soft(z, a * lambda / (a - 1.0)) / (1.0 - 1.0 / (a - 1.0));
      return z;
    }
    case PenaltyFamily::mcp:
    case PenaltyFamily::mnet: {
      const double g = gamma;
      const double ridge = 1.0 + 2.0 * lambda2;
      if (std::abs(z) <= g * lambda * ridge) return soft(z, lambda) / (ridge - 1.0 / g);
      return z / ridge;
    }
  }
  return z;
}

}  // namespace

Vector penalized_column_scale(const Matrix& X) {
  const double n = double(X.rows());
  Vector s(X.cols());
  for (Index j = 0; j < X.cols(); ++j) s(j) = X.col(j).norm() / std::sqrt(n);
  return s;
}

double penalized_objective(const Matrix& X, const Vector& Y, const PenaltySpec& spec,
                           const Vector& beta) {
  const double n = double(X.rows());
  const Vector s = penalized_column_scale(X);
  const Vector bt = (beta.array() * s.array()).matrix();  // internal scale
  double pen = 0.0;
  const double g = spec.effective_gamma();
  for (Index j = 0; j < bt.size(); ++j) {
    const double t = std::abs(bt(j));
    switch (spec.family) {
      case PenaltyFamily::ridge: pen += spec.lambda * t * t; break;
      case PenaltyFamily::lasso: pen += spec.lambda * t; break;
      case PenaltyFamily::alasso:
        pen += spec.lambda * (spec.weights.size() ? spec.weights(j) : 1.0) * t;
        break;
      case PenaltyFamily::enet: pen += spec.lambda * t + spec.lambda2 * t * t; break;
      case PenaltyFamily::scad: pen += scad_penalty(t, spec.lambda, g); break;
      case PenaltyFamily::mcp: pen += mcp_penalty(t, spec.lambda, g); break;
      case PenaltyFamily::mnet:
        pen += mcp_penalty(t, spec.lambda, g) + spec.lambda2 * t * t;
        break;
    }
  }
  return (Y - X * beta).squaredNorm() / (2.0 * n) + pen;
}

PenalizedFit fit_penalized(const Matrix& X, const Vector& Y, const PenaltySpec& spec,
                           const PenalizedOptions& options, const Vector* warm_start) {
  const Index n = X.rows();
  const Index p = X.cols();
  spec.validate(p);
  if ((spec.family == PenaltyFamily::mcp || spec.family == PenaltyFamily::mnet) &&
      spec.effective_gamma() * (1.0 + 2.0 * spec.lambda2) <= 1.0)
    throw InputError("MCP/MNET: need gamma (1 + 2 lambda2) > 1");

  const Vector s = penalized_column_scale(X);
  const double gamma = spec.effective_gamma();

  // internal coefficients bt_j = s_j * b_j; columns Xs_j = X_j / s_j have
  // (1/n)||Xs_j||^2 = 1 which keeps the univariate updates closed-form
  Vector bt = Vector::Zero(p);
  if (warm_start && warm_start->size() == p) bt = (warm_start->array() * s.array()).matrix();
  Vector resid = Y;
  for (Index j = 0; j < p; ++j)
    if (s(j) > 0.0 && bt(j) != 0.0) resid -= X.col(j) * (bt(j) / s(j));

  PenalizedFit fit;
  const double inv_n = 1.0 / double(n);
  bool converged = false;
  int sweep = 0;
  for (; sweep < options.max_sweeps; ++sweep) {
    double max_change = 0.0;
    for (Index j = 0; j < p; ++j) {
      if (s(j) <= 0.0) continue;  // constant zero column stays out
      const double old = bt(j);
      const double z = inv_n * X.col(j).dot(resid) / s(j) + old;
      const double w = spec.weights.size() ? spec.weights(j) : 1.0;
      const double next = update(spec.family, z, spec.lambda, spec.lambda2, gamma, w);
      if (next != old) {
        resid -= X.col(j) * ((next - old) / s(j));
        bt(j) = next;
        max_change = std::max(max_change, std::abs(next - old));
      }
    }
    if (options.track_objective) {
      Vector b = bt;
      for (Index j = 0; j < p; ++j) b(j) = s(j) > 0.0 ? bt(j) / s(j) : 0.0;
      fit.objective_trace.push_back(penalized_objective(X, Y, spec, b));
    }
    if (max_change < options.tol) {
      converged = true;
      ++sweep;
      break;
    }
  }
  fit.converged = converged;
  fit.sweeps = sweep;
  fit.beta = Vector::Zero(p);
  for (Index j = 0; j < p; ++j) fit.beta(j) = s(j) > 0.0 ? bt(j) / s(j) : 0.0;
  return fit;
}

double lambda_max_for(const Matrix& X, const Vector& Y, const PenaltySpec& spec) {
  const Vector s = penalized_column_scale(X);
  const double inv_n = 1.0 / double(X.rows());
  double anchor = 0.0;
  for (Index j = 0; j < X.cols(); ++j) {
    if (s(j) <= 0.0) continue;
    const double w =
        spec.family == PenaltyFamily::alasso && spec.weights.size() ? spec.weights(j) : 1.0;
    anchor = std::max(anchor, std::abs(inv_n * X.col(j).dot(Y) / s(j)) / w);
  }
  if (spec.family == PenaltyFamily::ridge) return 1e3 * anchor;
  return anchor;
}

PathResult lambda_path(const Matrix& X, const Vector& Y, PenaltySpec spec, int n_lambda,
                       int folds, double lambda2_ratio) {
  if (n_lambda < 10) throw InputError("lambda_path: need at least 10 grid points");
  if (folds < 2) throw InputError("lambda_path: need at least 2 folds");
  const Index n = X.rows();
  const Index p = X.cols();
  spec.validate(p);

  const double lmax = lambda_max_for(X, Y, spec);
  if (lmax <= 0.0) throw InputError("lambda_path: X'Y is identically zero");
  PathResult path;
  path.lambdas = Vector(n_lambda);
  for (int i = 0; i < n_lambda; ++i)
    path.lambdas(i) = std::exp(std::log(lmax) + (std::log(lmax * 1e-3) - std::log(lmax)) * i /
                                                    double(n_lambda - 1));

  const bool tied_ridge =
      spec.family == PenaltyFamily::enet || spec.family == PenaltyFamily::mnet;

  // full-data path with warm starts
  path.coefs = Matrix::Zero(p, n_lambda);
  {
    Vector warm = Vector::Zero(p);
    for (int i = 0; i < n_lambda; ++i) {
      PenaltySpec local = spec;
      local.lambda = path.lambdas(i);
      if (tied_ridge) local.lambda2 = lambda2_ratio * local.lambda;
      const auto fit = fit_penalized(X, Y, local, {}, &warm);
      warm = fit.beta;
      path.coefs.col(i) = fit.beta;
    }
  }

  // k-fold CV over the same grid
  Matrix fold_mse = Matrix::Zero(folds, n_lambda);
  Vector fold_count = Vector::Zero(folds);
  for (int f = 0; f < folds; ++f) {
    std::vector<Index> tr, va;
    for (Index i = 0; i < n; ++i) ((i % folds) == f ? va : tr).push_back(i);
    if (tr.empty() || va.empty()) continue;
    const Matrix Xt = X(tr, Eigen::all);
    const Vector Yt = Y(tr);
    const Matrix Xv = X(va, Eigen::all);
    const Vector Yv = Y(va);
    fold_count(f) = double(va.size());
    Vector warm = Vector::Zero(p);
    for (int i = 0; i < n_lambda; ++i) {
      PenaltySpec local = spec;
      local.lambda = path.lambdas(i);
      if (tied_ridge) local.lambda2 = lambda2_ratio * local.lambda;
      const auto fit = fit_penalized(Xt, Yt, local, {}, &warm);
      warm = fit.beta;
      fold_mse(f, i) = (Yv - Xv * fit.beta).squaredNorm() / double(va.size());
    }
  }
  path.cv_error = Vector(n_lambda);
  path.cv_se = Vector(n_lambda);
  for (int i = 0; i < n_lambda; ++i) {
    const auto col = fold_mse.col(i);
    const double mean = col.mean();
    const double var = (col.array() - mean).square().sum() / double(folds - 1);
    path.cv_error(i) = mean;
    path.cv_se(i) = std::sqrt(var / double(folds));
  }
  path.idx_min = 0;
  for (int i = 1; i < n_lambda; ++i)
    if (path.cv_error(i) < path.cv_error(path.idx_min)) path.idx_min = i;
  const double threshold = path.cv_error(path.idx_min) + path.cv_se(path.idx_min);
  path.idx_1se = path.idx_min;
  for (int i = 0; i <= path.idx_min; ++i) {
    if (path.cv_error(i) <= threshold) {
      path.idx_1se = i;  // lambdas descend, so the first hit is the largest
      break;
    }
  }
  path.lambda_min = path.lambdas(path.idx_min);
  path.lambda_1se = path.lambdas(path.idx_1se);
  return path;
}

Vector alasso_weights(const Vector& pilot_beta, double gamma) {
  Vector w(pilot_beta.size());
  for (Index j = 0; j < w.size(); ++j) {
    const double a = std::abs(pilot_beta(j));
    const double wj = a > 0.0 ? 1.0 / std::pow(a, gamma) : std::numeric_limits<double>::infinity();
    w(j) = std::clamp(wj, 1e-8, 1e8);
  }
  return w;
}

}  // namespace gridge
