#pragma once

namespace qmcqoi {

// Standard normal CDF.
double normal_cdf(double x);

// x with Phi(x) = p, p in (0,1); absolute accuracy well below 1e-9.
double normal_quantile(double p);

// Student-t CDF with df degrees of freedom.
double t_cdf(double x, unsigned df);

// x with F_df(x) = p; df >= 1.
double t_quantile(double p, unsigned df);

// Regularized incomplete beta I_x(a,b), continued-fraction evaluation.
double incomplete_beta(double a, double b, double x);

} // namespace qmcqoi
