#include "gridge/data.hpp"

#include <cmath>

namespace gridge {

RegressionData::RegressionData(Matrix x, Vector y) : X(std::move(x)), Y(std::move(y)) {
  if (X.rows() != Y.size()) throw InputError("X and Y row counts differ");
  if (X.rows() < 2) throw InputError("need at least two observations");
  if (X.cols() < 1) throw InputError("need at least one predictor");
}

RegressionData standardize(const RegressionData& data) {
  const Index n = data.n();
  const Index p = data.p();
  RegressionData out = data;
  out.col_mean = data.X.colwise().mean();
  out.col_scale = Vector(p);
  for (Index j = 0; j < p; ++j) {
    const double sd =
        std::sqrt((data.X.col(j).array() - out.col_mean(j)).square().sum() / double(n - 1));
    if (sd < 1e-12) throw ConstantColumn(j);
    out.col_scale(j) = sd;
  }
  out.X = (data.X.rowwise() - out.col_mean.transpose()).array().rowwise() /
          out.col_scale.transpose().array();
  // compose with any previous standardization so back-transformation still
  // refers to the caller's original coordinates
  if (data.scaled) {
    out.col_mean = data.col_mean + (out.col_mean.array() * data.col_scale.array()).matrix();
    out.col_scale = (out.col_scale.array() * data.col_scale.array()).matrix();
  }
  out.scaled = true;
  return out;
}

RegressionData center_response(const RegressionData& data) {
  RegressionData out = data;
  const double mean = data.Y.mean();
  out.Y = data.Y.array() - mean;
  out.y_offset = data.y_offset + mean;
  out.centered = true;
  return out;
}

Vector to_original_scale(const RegressionData& fitted_on, const Vector& beta) {
  if (!fitted_on.scaled) return beta;
  return (beta.array() / fitted_on.col_scale.array()).matrix();
}

double original_intercept(const RegressionData& fitted_on, const Vector& beta) {
  double a = fitted_on.y_offset;
  if (fitted_on.scaled) a -= to_original_scale(fitted_on, beta).dot(fitted_on.col_mean);
  return a;
}

}  // namespace gridge
