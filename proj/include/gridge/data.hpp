#pragma once

#include <string>
#include <vector>

#include "gridge/types.hpp"

namespace gridge {

/// Design matrix, response and the preprocessing state needed to map
/// coefficients back to the original scale.
struct RegressionData {
  Matrix X;
  Vector Y;
  bool centered = false;     // response mean removed
  bool scaled = false;       // columns standardized
  Vector col_mean;           // per-column means removed by standardize()
  Vector col_scale;          // per-column sds divided out by standardize()
  double y_offset = 0.0;     // response mean removed by center_response()
  std::vector<std::string> column_names;  // empty unless loaded from CSV

  RegressionData() = default;
  RegressionData(Matrix x, Vector y);

  Index n() const { return X.rows(); }
  Index p() const { return X.cols(); }
};

/// Columns to zero mean and unit sample sd (divisor n-1). Offsets are stored
/// so fitted coefficients can be mapped back. Throws ConstantColumn.
RegressionData standardize(const RegressionData& data);

/// Removes the response mean and stores it as y_offset.
RegressionData center_response(const RegressionData& data);

/// Maps coefficients fitted on standardized data back to the original scale.
Vector to_original_scale(const RegressionData& fitted_on, const Vector& beta);

/// Intercept implied by the preprocessing offsets for original-scale use.
double original_intercept(const RegressionData& fitted_on, const Vector& beta);

}  // namespace gridge
