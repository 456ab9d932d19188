#include "gridge/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "gridge/rng.hpp"

namespace gridge {

namespace {

Matrix ar1_covariance(Index p, double rho) {
  Matrix sigma(p, p);
  for (Index i = 0; i < p; ++i)
    for (Index j = 0; j < p; ++j) sigma(i, j) = std::pow(rho, std::abs(double(i - j)));
  return sigma;
}

Matrix group_covariance(Index p, double rho, Index group_size, Index n_groups, double between) {
  Matrix sigma = Matrix::Constant(p, p, between);
  for (Index g = 0; g < n_groups; ++g) {
    const Index lo = g * group_size;
    for (Index i = lo; i < lo + group_size; ++i)
      for (Index j = lo; j < lo + group_size; ++j) sigma(i, j) = rho;
  }
  sigma.diagonal().setOnes();
  return sigma;
}

Vector zeros_then(const std::initializer_list<std::pair<double, Index>>& blocks) {
  Index p = 0;
  for (const auto& b : blocks) p += b.second;
  Vector beta(p);
  Index at = 0;
  for (const auto& b : blocks) {
    beta.segment(at, b.second).setConstant(b.first);
    at += b.second;
  }
  return beta;
}

std::vector<Index> zero_coordinates(const Vector& beta) {
  std::vector<Index> zero;
  for (Index j = 0; j < beta.size(); ++j)
    if (beta(j) == 0.0) zero.push_back(j);
  return zero;
}

Matrix draw_gaussian(std::mt19937_64& gen, Index rows, Index cols) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix z(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) z(i, j) = gauss(gen);
  return z;
}

}  // namespace

Matrix Scenario::covariance() const {
  if (cov == CovKind::ar1) return ar1_covariance(p, rho);
  return group_covariance(p, rho, group_size, n_groups, between);
}

Scenario make_named_scenario(const std::string& name, double rho) {
  Scenario scn;
  scn.name = name;
  scn.rho = rho;
  if (name == "LD1") {
    scn.n_train = 20;
    scn.n_valid = 20;
    scn.n_test = 200;
    scn.p = 8;
    scn.beta_true = Vector(8);
    scn.beta_true << 3, 1.5, 0, 0, 2, 0, 0, 0;
    scn.sigma = 3.0;
    scn.replicates = 250;
  } else if (name == "LD2") {
    scn.n_train = 100;
    scn.n_valid = 100;
    scn.n_test = 400;
    scn.p = 40;
    scn.beta_true = zeros_then({{0.0, 10}, {2.0, 10}, {0.0, 10}, {2.0, 10}});
    scn.sigma = 1.0;
    scn.replicates = 250;
  } else if (name == "LD3") {
    scn.n_train = 50;
    scn.n_valid = 50;
    scn.n_test = 200;
    scn.p = 30;
    scn.beta_true = zeros_then({{2.0, 5}, {0.0, 25}});
    scn.sigma = 9.0;
    scn.replicates = 250;
  } else if (name == "HD1") {
    scn.n_train = 50;
    scn.p = 100;
    scn.beta_true = zeros_then({{1.0, 5}, {0.0, 95}});
    scn.sigma = 3.0;
    scn.replicates = 50;
  } else if (name == "HD2") {
    scn.n_train = 50;
    scn.p = 150;
    scn.beta_true = zeros_then({{3.0, 10}, {0.0, 140}});
    scn.sigma = 2.0;
    scn.replicates = 50;
  } else if (name == "HD3") {
    scn.n_train = 50;
    scn.p = 120;
    scn.beta_true = zeros_then({{5.0, 10}, {-5.0, 10}, {3.0, 10}, {-3.0, 10}, {0.0, 80}});
    scn.sigma = 3.0;
    scn.cov = CovKind::group_block;
    scn.group_size = 10;
    scn.n_groups = 4;
    scn.between = 0.1;
    scn.replicates = 50;
  } else {
    throw UnknownScenario("unknown scenario: " + name);
  }
  return scn;
}

ReplicateData generate_replicate(const Scenario& scn, int rep_index) {
  auto gen = substream(scn.seed, static_cast<std::uint64_t>(rep_index));
  const Matrix L = Eigen::LLT<Matrix>(scn.covariance()).matrixL();
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto draw = [&](Index n) {
    Matrix X = draw_gaussian(gen, n, scn.p) * L.transpose();
    Vector Y = X * scn.beta_true;
    for (Index i = 0; i < n; ++i) Y(i) += scn.sigma * gauss(gen);
    return std::pair<Matrix, Vector>(std::move(X), std::move(Y));
  };
  auto [Xtr, Ytr] = draw(scn.n_train);
  ReplicateData rep{RegressionData(std::move(Xtr), std::move(Ytr)), {}, {}, {}, {}};
  if (scn.n_valid > 0) {
    auto [Xv, Yv] = draw(scn.n_valid);
    rep.X_valid = std::move(Xv);
    rep.Y_valid = std::move(Yv);
  }
  if (scn.n_test > 0) {
    auto [Xt, Yt] = draw(scn.n_test);
    rep.X_test = std::move(Xt);
    rep.Y_test = std::move(Yt);
  }
  return rep;
}

Scenario default_sweep_scenario() {
  Scenario scn;
  scn.name = "sweep";
  scn.n_train = 50;
  scn.p = 10;
  scn.beta_true = zeros_then({{1.0, 5}, {0.0, 5}});
  scn.sigma = 3.0;
  scn.rho = 0.5;
  scn.replicates = 250;
  return scn;
}

std::vector<SweepRow> delta_sweep(const Scenario& base, const std::vector<double>& delta_grid,
                                  double alpha) {
  const Index p = base.p;
  const auto zero = zero_coordinates(base.beta_true);
  if (zero.empty()) throw InputError("delta_sweep: base coefficients have no zero block");
  const Index q = static_cast<Index>(zero.size());
  const Restriction restriction = Restriction::coordinates(zero, p);

  const std::vector<EstimatorKind> kinds{
      EstimatorKind::GRR, EstimatorKind::RGRR, EstimatorKind::LS,
      EstimatorKind::PT,  EstimatorKind::SPT,  EstimatorKind::S,
      EstimatorKind::PS,  EstimatorKind::IPT};
  if (q < 3) throw InputError("delta_sweep: need q >= 3");

  std::vector<SweepRow> rows;
  for (std::size_t di = 0; di < delta_grid.size(); ++di) {
    Scenario scn = base;
    scn.beta_true(zero.front()) = delta_grid[di];  // violation in first nuisance coordinate
    std::vector<double> mseb(kinds.size(), 0.0);
    for (int rep = 0; rep < scn.replicates; ++rep) {
      const auto data = generate_replicate(
          scn, static_cast<int>(di) * scn.replicates + rep);
      const auto train = center_response(standardize(data.train));
      const auto lse = fit_lse(train);
      const double rss = (train.Y - train.X * lse.beta).squaredNorm();
      const double sigma2 = rss / double(train.n() - train.p());
      const RidgeSpec k = hoerl_kennard_k(lse.beta, sigma2);
      const double omega = select_omega_cv(train, k, restriction);
      const auto family = fit_shrinkage_family(train, k, restriction, alpha, omega);
      for (std::size_t ki = 0; ki < kinds.size(); ++ki) {
        const Vector err =
            to_original_scale(train, family.member(kinds[ki]).beta) - scn.beta_true;
        mseb[ki] += err.squaredNorm();
      }
    }
    const double bench = mseb[0];  // GRR
    for (std::size_t ki = 0; ki < kinds.size(); ++ki)
      rows.push_back({delta_grid[di], kind_name(kinds[ki]), bench / mseb[ki]});
  }
  return rows;
}

namespace {

struct Accumulator {
  double sum = 0.0, sumsq = 0.0;
  int n = 0;
  void add(double v) {
    sum += v;
    sumsq += v * v;
    ++n;
  }
  double mean() const { return n ? sum / n : 0.0; }
  double se() const {
    if (n < 2) return 0.0;
    const double m = mean();
    return std::sqrt(std::max(0.0, (sumsq - n * m * m) / double(n - 1)) / double(n));
  }
};

struct MetricAccum {
  Accumulator mse_y, mse_beta, pe;
};

struct FittedBeta {
  std::string name;
  Vector beta_orig;
  double intercept = 0.0;
};

// per-estimator metrics against a reference coefficient vector
void score(std::vector<std::pair<std::string, MetricAccum>>& table, const FittedBeta& fit,
           const Vector& beta_ref, const Matrix& X_eval, const Matrix& X_pe, const Vector& Y_pe) {
  auto it = std::find_if(table.begin(), table.end(),
                         [&](const auto& row) { return row.first == fit.name; });
  if (it == table.end()) {
    table.push_back({fit.name, {}});
    it = std::prev(table.end());
  }
  const Vector err = beta_ref - fit.beta_orig;
  it->second.mse_y.add((X_eval * err).squaredNorm() / double(X_eval.rows()));
  it->second.mse_beta.add(err.squaredNorm());
  if (Y_pe.size() > 0)
    it->second.pe.add((Y_pe - ((X_pe * fit.beta_orig).array() + fit.intercept).matrix())
                          .squaredNorm() /
                      double(Y_pe.size()));
}

std::vector<MetricRow> finalize(const std::vector<std::pair<std::string, MetricAccum>>& table,
                                const std::string& benchmark) {
  double bench_mse_y = 0.0, bench_mse_beta = 0.0, bench_pe = 0.0;
  for (const auto& [name, acc] : table)
    if (name == benchmark) {
      bench_mse_y = acc.mse_y.mean();
      bench_mse_beta = acc.mse_beta.mean();
      bench_pe = acc.pe.mean();
    }
  std::vector<MetricRow> rows;
  for (const auto& [name, acc] : table) {
    MetricRow row;
    row.estimator = name;
    row.mse_y = acc.mse_y.mean();
    row.mse_beta = acc.mse_beta.mean();
    row.pe = acc.pe.mean();
    row.se_mse_y = acc.mse_y.se();
    row.se_mse_beta = acc.mse_beta.se();
    row.se_pe = acc.pe.se();
    row.rmse_vs_benchmark = row.mse_y > 0.0 ? bench_mse_y / row.mse_y : 0.0;
    row.rel_mse_beta = row.mse_beta > 0.0 ? bench_mse_beta / row.mse_beta : 0.0;
    row.rel_pe = row.pe > 0.0 ? bench_pe / row.pe : 0.0;
    rows.push_back(row);
  }
  return rows;
}

Vector validation_pick_lambda(const Matrix& Xt, const Vector& Yt, const Matrix& Xv,
                              const Vector& Yv, PenaltySpec spec, int n_lambda,
                              double lambda2_ratio) {
  const double lmax = lambda_max_for(Xt, Yt, spec);
  Vector warm = Vector::Zero(Xt.cols());
  Vector best;
  double best_err = std::numeric_limits<double>::infinity();
  const bool tied = spec.family == PenaltyFamily::enet || spec.family == PenaltyFamily::mnet;
  for (int i = 0; i < n_lambda; ++i) {
    PenaltySpec local = spec;
    local.lambda = std::exp(std::log(lmax) +
                            (std::log(lmax * 1e-3) - std::log(lmax)) * i / double(n_lambda - 1));
    if (tied) local.lambda2 = lambda2_ratio * local.lambda;
    const auto fit = fit_penalized(Xt, Yt, local, {}, &warm);
    warm = fit.beta;
    const double err = (Yv - Xv * fit.beta).squaredNorm();
    if (err < best_err) {
      best_err = err;
      best = fit.beta;
    }
  }
  return best;
}

const std::vector<PenaltyFamily> kPenaltyOrder{
    PenaltyFamily::ridge, PenaltyFamily::lasso, PenaltyFamily::alasso, PenaltyFamily::scad,
    PenaltyFamily::mcp,   PenaltyFamily::enet,  PenaltyFamily::mnet};

}  // namespace

std::vector<MetricRow> run_table_scenario(const std::string& name, double rho,
                                          int replicates_override, std::uint64_t seed,
                                          double alpha) {
  Scenario scn = make_named_scenario(name, rho);
  if (replicates_override > 0) scn.replicates = replicates_override;
  scn.seed = seed;
  const auto zero = zero_coordinates(scn.beta_true);
  if (zero.empty()) throw InputError("table scenario needs a zero coefficient block");
  const Restriction restriction = Restriction::coordinates(zero, scn.p);
  const Index q = static_cast<Index>(zero.size());
  const bool hd = scn.is_hd();

  const std::vector<EstimatorKind> family_order{
      EstimatorKind::GRR, EstimatorKind::RGRR, EstimatorKind::LS, EstimatorKind::PT,
      EstimatorKind::SPT, EstimatorKind::PS,   EstimatorKind::IPT};

  std::vector<std::pair<std::string, MetricAccum>> table;
  for (int rep = 0; rep < scn.replicates; ++rep) {
    const auto data = generate_replicate(scn, rep);
    const auto train = center_response(standardize(data.train));
    const Matrix& X_eval = hd ? data.train.X : data.X_test;
    const Matrix& X_pe = hd ? data.train.X : data.X_test;
    const Vector& Y_pe = hd ? data.train.Y : data.Y_test;

    std::vector<FittedBeta> fits;
    auto push = [&](const std::string& nm, const Vector& beta_std) {
      fits.push_back({nm, to_original_scale(train, beta_std),
                      original_intercept(train, beta_std)});
    };

    Vector alasso_pilot;
    if (!hd) {
      const auto lse = fit_lse(train);
      const double rss = (train.Y - train.X * lse.beta).squaredNorm();
      const double sigma2 = rss / double(train.n() - train.p());
      const RidgeSpec k = hoerl_kennard_k(lse.beta, sigma2);
      auto family0 = fit_shrinkage_family(train, k, restriction, alpha, 0.0);
      const double omega = select_omega_validation(family0.grr, family0.rgrr, train,
                                                   data.X_valid, data.Y_valid);
      const auto family = fit_shrinkage_family(train, k, restriction, alpha, omega);
      for (auto kind : family_order) push(kind_name(kind), family.member(kind).beta);
      push("LSE", lse.beta);
      alasso_pilot = lse.beta;
    } else {
      const RidgeSpec k = hd_k_selection(train.X, train.Y);
      PartitionedData part(train.X.leftCols(scn.p - q), train.X.rightCols(q), train.Y);
      const double d_star = select_d_star(part, k, 5, default_d_star_grid(), alpha);
      const double omega = select_omega_cv(train, k, restriction);
      const auto family = fit_hd_family(part, k, alpha, omega, d_star);
      for (auto kind : family_order) push(kind_name(kind), family.member(kind).beta);
      RidgeSystem pilot_system(train.X, scalar_cv_k(train, 5));
      alasso_pilot = pilot_system.solve(train.X.transpose() * train.Y);
    }

    for (auto fam : kPenaltyOrder) {
      PenaltySpec spec;
      spec.family = fam;
      if (fam == PenaltyFamily::alasso) spec.weights = alasso_weights(alasso_pilot, 1.0);
      if (!hd) {
        const Matrix Xv_std = ((data.X_valid.rowwise() - train.col_mean.transpose())
                                   .array()
                                   .rowwise() /
                               train.col_scale.transpose().array())
                                  .matrix();
        const Vector Yv_c = data.Y_valid.array() - train.y_offset;
        const Vector beta = validation_pick_lambda(train.X, train.Y, Xv_std, Yv_c, spec, 50, 1.0);
        push(family_name(fam), beta);
      } else {
        const auto path = lambda_path(train.X, train.Y, spec, 50, 5, 1.0);
        push(family_name(fam), path.coefs.col(path.idx_1se));
      }
    }

    for (const auto& fit : fits)
      score(table, fit, scn.beta_true, X_eval, X_pe, Y_pe);
  }
  return finalize(table, "GRR");
}

std::vector<Index> select_submodel_1se(const RegressionData& data, int folds) {
  const auto prepped = center_response(standardize(data));
  PenaltySpec spec;
  spec.family = PenaltyFamily::lasso;
  const auto path = lambda_path(prepped.X, prepped.Y, spec, 50, folds);
  const Vector beta = path.coefs.col(path.idx_1se);
  std::vector<Index> zero;
  for (Index j = 0; j < beta.size(); ++j)
    if (std::abs(beta(j)) < 1e-12) zero.push_back(j);
  return zero;
}

std::vector<MetricRow> bootstrap_evaluate(const RegressionData& data,
                                          const std::vector<Index>& submodel_keep,
                                          const BootstrapOptions& options) {
  if (options.B < 1) throw InputError("bootstrap: B must be >= 1");
  const Index n = data.n();
  const Index p = data.p();

  std::vector<bool> keep(static_cast<std::size_t>(p), false);
  for (Index j : submodel_keep) {
    if (j < 0 || j >= p) throw InputError("bootstrap: submodel index out of range");
    keep[static_cast<std::size_t>(j)] = true;
  }
  std::vector<Index> restricted;
  for (Index j = 0; j < p; ++j)
    if (!keep[static_cast<std::size_t>(j)]) restricted.push_back(j);
  if (restricted.empty()) throw InputError("bootstrap: restriction must drop something");
  if (restricted.size() == static_cast<std::size_t>(p))
    throw InputError("bootstrap: sub-model keeps no columns");

  // pseudo-truth: full-data GRR fit
  const auto full = center_response(standardize(data));
  Vector beta_ref;
  if (p < n) {
    const auto lse = fit_lse(full);
    const double rss = (full.Y - full.X * lse.beta).squaredNorm();
    const RidgeSpec k = hoerl_kennard_k(lse.beta, rss / double(n - p));
    beta_ref = to_original_scale(full, fit_grr(full, k).beta);
  } else {
    const RidgeSpec k = hd_k_selection(full.X, full.Y);
    beta_ref = to_original_scale(full, fit_grr(full, k).beta);
  }

  const Restriction restriction = Restriction::coordinates(restricted, p);
  const Index q = static_cast<Index>(restricted.size());
  const std::vector<EstimatorKind> family_order{
      EstimatorKind::GRR, EstimatorKind::RGRR, EstimatorKind::LS, EstimatorKind::PT,
      EstimatorKind::SPT, EstimatorKind::PS,   EstimatorKind::IPT};

  // permutation [kept..., restricted...] for the partitioned HD layout
  std::vector<Index> perm;
  for (Index j = 0; j < p; ++j)
    if (keep[static_cast<std::size_t>(j)]) perm.push_back(j);
  for (Index j : restricted) perm.push_back(j);

  std::vector<std::pair<std::string, MetricAccum>> table;
  const Index n_tr = std::max<Index>(4, static_cast<Index>(std::lround(
                                            options.train_fraction * double(n))));
  for (int b = 0; b < options.B; ++b) {
    std::vector<Index> rows(static_cast<std::size_t>(n));
    if (options.resample) {
      auto gen = substream(options.seed, static_cast<std::uint64_t>(b));
      std::uniform_int_distribution<Index> pick(0, n - 1);
      for (auto& r : rows) r = pick(gen);
    } else {
      std::iota(rows.begin(), rows.end(), Index(0));
    }
    const std::vector<Index> tr(rows.begin(), rows.begin() + n_tr);
    const std::vector<Index> te(rows.begin() + n_tr, rows.end());
    RegressionData train_raw(data.X(tr, Eigen::all), data.Y(tr));
    const Matrix X_test = data.X(te, Eigen::all);
    const Vector Y_test = data.Y(te);

    RegressionData train;
    try {
      train = center_response(standardize(train_raw));
    } catch (const ConstantColumn&) {
      continue;  // resample produced a degenerate column; skip replicate
    }

    std::vector<FittedBeta> fits;
    auto push = [&](const std::string& nm, const Vector& beta_std) {
      fits.push_back({nm, to_original_scale(train, beta_std),
                      original_intercept(train, beta_std)});
    };

    Vector alasso_pilot;
    const bool hd = p >= train.n();
    try {
      if (!hd) {
        const auto lse = fit_lse(train);
        const double rss = (train.Y - train.X * lse.beta).squaredNorm();
        const RidgeSpec k = hoerl_kennard_k(lse.beta, rss / double(train.n() - p));
        const double omega = select_omega_cv(train, k, restriction, options.folds);
        const auto family = fit_shrinkage_family(train, k, restriction, options.alpha, omega);
        for (auto kind : family_order) push(kind_name(kind), family.member(kind).beta);
        push("LSE", lse.beta);
        alasso_pilot = lse.beta;
      } else {
        const RidgeSpec k_full = hd_k_selection(train.X, train.Y, options.folds);
        // work in permuted coordinates so the candidate block sits last
        Matrix Xp(train.n(), p);
        for (Index j = 0; j < p; ++j) Xp.col(j) = train.X.col(perm[static_cast<std::size_t>(j)]);
        Vector kp(p);
        for (Index j = 0; j < p; ++j) kp(j) = k_full.k(perm[static_cast<std::size_t>(j)]);
        const RidgeSpec k{kp, k_full.policy};
        PartitionedData part(Xp.leftCols(p - q), Xp.rightCols(q), train.Y);
        const double d_star =
            select_d_star(part, k, options.folds, default_d_star_grid(), options.alpha);
        const double omega = select_omega_cv(train, k_full, restriction, options.folds);
        const auto family = fit_hd_family(part, k, options.alpha, omega, d_star);
        for (auto kind : family_order) {
          Vector beta_std(p);  // un-permute
          const Vector& bp = family.member(kind).beta;
          for (Index j = 0; j < p; ++j) beta_std(perm[static_cast<std::size_t>(j)]) = bp(j);
          push(kind_name(kind), beta_std);
        }
        RidgeSystem pilot_system(train.X, scalar_cv_k(train, options.folds));
        alasso_pilot = pilot_system.solve(train.X.transpose() * train.Y);
      }
      for (auto fam : kPenaltyOrder) {
        PenaltySpec spec;
        spec.family = fam;
        if (fam == PenaltyFamily::alasso) spec.weights = alasso_weights(alasso_pilot, 1.0);
        const auto path = lambda_path(train.X, train.Y, spec, 50, options.folds, 1.0);
        push(family_name(fam), path.coefs.col(path.idx_1se));
      }
    } catch (const NumericalError&) {
      continue;  // degenerate resample
    }

    for (const auto& fit : fits) score(table, fit, beta_ref, X_test, X_test, Y_test);
  }
  return finalize(table, "GRR");
}

}  // namespace gridge
