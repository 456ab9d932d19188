#pragma once

namespace gridge {

// Thin wrappers around boost::math kept out of headers to limit compile cost.

double f_cdf(double x, double df1, double df2);
double f_upper_quantile(double alpha, double df1, double df2);
double f_pdf(double x, double df1, double df2);
double normal_cdf(double x);
double normal_quantile(double p);
double ibeta(double a, double b, double x);  // regularized incomplete beta

}  // namespace gridge
