#pragma once

#include <cstdint>
#include <functional>

#include "gridge/types.hpp"

namespace gridge {

/// Non-central F distribution with (df1, df2) degrees of freedom.
/// `noncentrality` stores Delta^2; the internal Poisson mixture rate is
/// Delta^2 / 2. Used uniformly across the library so test statistics and
/// risk formulas agree on the convention.
struct NcfParams {
  int df1 = 1;
  int df2 = 1;
  double noncentrality = 0.0;  // Delta^2 >= 0

  void validate() const {
    if (df1 < 1 || df2 < 1) throw InputError("ncf: degrees of freedom must be >= 1");
    if (noncentrality < 0.0) throw InputError("ncf: noncentrality must be >= 0");
  }
};

inline constexpr double kNcfCdfEps = 1e-8;
inline constexpr double kNcfMomentEps = 1e-6;

/// P(F <= c). Poisson(Delta^2/2)-weighted series of central incomplete-beta
/// terms; the series stops once the remaining Poisson tail mass is below
/// eps * 1e-2 and the running term contributes less than eps * 1e-3.
double ncf_cdf(const NcfParams& params, double c, double eps = kNcfCdfEps);

/// E[F^-r] for r in {1, 2}. Requires df1 > 2r. Computed as
/// (df1/df2)^r * E[(chi2_df2)^r] * E[(chi2_df1(Delta^2))^-r], the last factor
/// via the Poisson mixture over central inverse-chi-square moments.
double ncf_inv_moment(const NcfParams& params, int r, double eps = kNcfMomentEps);

/// E[F^-r I(F <= c)] for r in {0, 1, 2}; r = 0 reduces to ncf_cdf. Adaptive
/// quadrature of the mixture density over (0, c].
double ncf_truncated_inv_moment(const NcfParams& params, int r, double c,
                                double eps = kNcfMomentEps);

/// Density of the non-central F at x (mixture of scaled central F densities).
double ncf_pdf(const NcfParams& params, double x, double eps = kNcfCdfEps);

struct McEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

/// Plain Monte Carlo estimate of E[functional(F)] with standard error.
/// Deterministic for a fixed seed. Requires n_draws >= 1e4.
McEstimate mc_oracle(const NcfParams& params, const std::function<double(double)>& functional,
                     std::size_t n_draws, std::uint64_t seed);

}  // namespace gridge
