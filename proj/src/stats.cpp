#include "gridge/stats.hpp"

#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/beta.hpp>

namespace gridge {

double f_cdf(double x, double df1, double df2) {
  if (x <= 0.0) return 0.0;
  boost::math::fisher_f_distribution<double> dist(df1, df2);
  return boost::math::cdf(dist, x);
}

double f_upper_quantile(double alpha, double df1, double df2) {
  boost::math::fisher_f_distribution<double> dist(df1, df2);
  return boost::math::quantile(boost::math::complement(dist, alpha));
}

double f_pdf(double x, double df1, double df2) {
  if (x <= 0.0) return 0.0;
  boost::math::fisher_f_distribution<double> dist(df1, df2);
  return boost::math::pdf(dist, x);
}

double normal_cdf(double x) {
  boost::math::normal_distribution<double> dist;
  return boost::math::cdf(dist, x);
}

double normal_quantile(double p) {
  boost::math::normal_distribution<double> dist;
  return boost::math::quantile(dist, p);
}

double ibeta(double a, double b, double x) { return boost::math::ibeta(a, b, x); }

}  // namespace gridge
