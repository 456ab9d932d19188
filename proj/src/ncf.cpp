#include "gridge/ncf.hpp"

#include <cmath>
#include <random>
#include <vector>

#include "gridge/rng.hpp"
#include "gridge/stats.hpp"

namespace gridge {

namespace {

// Poisson(rate) weights w_0, w_1, ... computed by recurrence, truncated when
// the cumulative mass reaches 1 - tail_tol. rate = Delta^2 / 2.
std::vector<double> poisson_weights(double rate, double tail_tol) {
  std::vector<double> w;
  if (rate <= 0.0) {
    w.push_back(1.0);
    return w;
  }
  double term = std::exp(-rate);
  double cum = term;
  w.push_back(term);
  // guard: for large rates exp(-rate) underflows; start from the log domain
  if (term == 0.0) {
    // accumulate in log space around the mode
    const int jmax = static_cast<int>(rate + 12.0 * std::sqrt(rate) + 40.0);
    w.assign(static_cast<std::size_t>(jmax) + 1, 0.0);
    double logt = -rate;
    for (int j = 0; j <= jmax; ++j) {
      w[static_cast<std::size_t>(j)] = std::exp(logt);
      logt += std::log(rate) - std::log(j + 1.0);
    }
    return w;
  }
  int j = 0;
  const int jcap = static_cast<int>(rate + 12.0 * std::sqrt(rate) + 200.0);
  while (cum < 1.0 - tail_tol && j < jcap) {
    ++j;
    term *= rate / j;
    cum += term;
    w.push_back(term);
  }
  return w;
}

double central_f_pdf(double x, double d1, double d2) { return f_pdf(x, d1, d2); }

// Adaptive Simpson on [a, b].
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa,
                        double fm, double fb, double whole, double eps, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * eps) {
    return left + right + (left + right - whole) / 15.0;
  }
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double eps) {
  const double m = 0.5 * (a + b);
  const double fa = f(a);
  const double fm = f(m);
  const double fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(f, a, b, fa, fm, fb, whole, eps, 40);
}

}  // namespace

double ncf_cdf(const NcfParams& params, double c, double eps) {
  params.validate();
  if (c <= 0.0) return 0.0;  // c < 0 returns 0 by convention
  const double d1 = params.df1;
  const double d2 = params.df2;
  // P(F <= c | J = j) = I_u(d1/2 + j, d2/2) with u independent of j.
  const double u = d1 * c / (d1 * c + d2);
  const auto w = poisson_weights(0.5 * params.noncentrality, eps * 1e-2);
  double sum = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) {
    const double term = w[j] * ibeta(0.5 * d1 + static_cast<double>(j), 0.5 * d2, u);
    sum += term;
    if (j + 1 == w.size()) break;
    if (term < eps * 1e-3 && j > 0.5 * params.noncentrality) break;
  }
  return std::min(sum, 1.0);
}

double ncf_inv_moment(const NcfParams& params, int r, double eps) {
  params.validate();
  if (r != 1 && r != 2) throw InputError("ncf_inv_moment: order must be 1 or 2");
  if (params.df1 <= 2 * r)
    throw MomentUndefined("E[F^-" + std::to_string(r) + "] undefined for df1 <= " +
                          std::to_string(2 * r));
  const double d1 = params.df1;
  const double d2 = params.df2;
  const double chi2_num_moment = (r == 1) ? d2 : d2 * (d2 + 2.0);
  const auto w = poisson_weights(0.5 * params.noncentrality, eps * 1e-2);
  double inv = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) {
    const double v = d1 + 2.0 * static_cast<double>(j);
    const double term = (r == 1) ? w[j] / (v - 2.0) : w[j] / ((v - 2.0) * (v - 4.0));
    inv += term;
    if (term < eps * 1e-3 && j > 0.5 * params.noncentrality) break;
  }
  return std::pow(d1 / d2, r) * chi2_num_moment * inv;
}

double ncf_pdf(const NcfParams& params, double x, double eps) {
  params.validate();
  if (x <= 0.0) return 0.0;
  const double d1 = params.df1;
  const double d2 = params.df2;
  const auto w = poisson_weights(0.5 * params.noncentrality, eps * 1e-2);
  double sum = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) {
    // Given J = j the variable equals ((d1+2j)/d1) * F_{d1+2j, d2}.
    const double a = (d1 + 2.0 * static_cast<double>(j)) / d1;
    sum += w[j] / a * central_f_pdf(x / a, d1 + 2.0 * static_cast<double>(j), d2);
  }
  return sum;
}

double ncf_truncated_inv_moment(const NcfParams& params, int r, double c, double eps) {
  params.validate();
  if (r < 0 || r > 2) throw InputError("ncf_truncated_inv_moment: order must be 0, 1 or 2");
  if (c <= 0.0) throw InputError("ncf_truncated_inv_moment: truncation point must be > 0");
  if (r == 0) return ncf_cdf(params, c, eps);
  if (params.df1 <= 2 * r)
    throw MomentUndefined("E[F^-" + std::to_string(r) + " I] undefined for df1 <= " +
                          std::to_string(2 * r));
  // Substitute x = t^2: the integrand t^{-2r} * pdf(t^2) * 2t stays bounded
  // near zero because df1 > 2r.
  auto integrand = [&](double t) {
    if (t <= 0.0) return 0.0;
    const double x = t * t;
    return 2.0 * t * std::pow(x, -r) * ncf_pdf(params, x, eps);
  };
  return integrate(integrand, 0.0, std::sqrt(c), eps * 1e-2);
}

McEstimate mc_oracle(const NcfParams& params, const std::function<double(double)>& functional,
                     std::size_t n_draws, std::uint64_t seed) {
  params.validate();
  if (n_draws < 10000) throw InputError("mc_oracle: need at least 1e4 draws");
  auto gen = substream(seed, 0x6e63665fULL);
  std::poisson_distribution<int> pois(0.5 * params.noncentrality);
  const double d1 = params.df1;
  const double d2 = params.df2;
  std::gamma_distribution<double> denom_gamma(0.5 * d2, 2.0);
  double sum = 0.0, sumsq = 0.0;
  for (std::size_t i = 0; i < n_draws; ++i) {
    const int j = params.noncentrality > 0.0 ? pois(gen) : 0;
    std::gamma_distribution<double> num_gamma(0.5 * (d1 + 2.0 * j), 2.0);
    const double num = num_gamma(gen) / d1;
    const double den = denom_gamma(gen) / d2;
    const double f = num / den;
    const double v = functional(f);
    sum += v;
    sumsq += v * v;
  }
  const double n = static_cast<double>(n_draws);
  const double mean = sum / n;
  const double var = std::max(0.0, (sumsq - n * mean * mean) / (n - 1.0));
  return {mean, std::sqrt(var / n)};
}

}  // namespace gridge
