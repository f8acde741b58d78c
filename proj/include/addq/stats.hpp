#pragma once

#include <functional>
#include <span>

namespace addq {

/// Regularized lower incomplete gamma P(a, x): series for x < a + 1,
/// continued fraction otherwise.
double regularized_gamma_p(double a, double x);

/// CDF of the chi-squared law with `dof` degrees of freedom.
double chi2_cdf(double x, int dof);

struct KsResult {
  double statistic;
  double p_value;
};

/// Survival function of the Kolmogorov distribution, 100-term series.
double kolmogorov_survival(double lambda);

/// One-sample two-sided Kolmogorov-Smirnov test. Needs at least 10 samples.
KsResult ks_test(std::span<const double> samples, const std::function<double(double)>& cdf);

}  // namespace addq
