#include "addq/theory.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace addq {

CyclicEstimate cyclic_target_estimator(const ArmFamily& arms, int N, double gamma, Rng& rng) {
  if (N < 2) throw std::invalid_argument("cyclic_target_estimator: need N >= 2");
  if (arms.k < 1) throw std::invalid_argument("cyclic_target_estimator: need k >= 1");
  std::normal_distribution<double> noise(0.0, 1.0);
  std::vector<std::vector<double>> draws(arms.k);
  for (auto& d : draws) d.reserve(N);
  for (int round = 0; round < N; ++round)
    for (int a = 0; a < arms.k; ++a) {
      const double x = arms.sigma == 0.0 ? arms.mu : arms.mu + arms.sigma * noise(rng);
      draws[a].push_back(x);
    }

  // Equal play counts: 1/n_a + 1/n_a' = 2/N for every pair of arms.
  for (const auto& d : draws)
    if (static_cast<int>(d.size()) != N)
      throw std::logic_error("cyclic_target_estimator: unequal play counts");

  int chosen = 0;
  std::vector<double> means(arms.k);
  for (int a = 0; a < arms.k; ++a) {
    double m = 0.0;
    for (double x : draws[a]) m += x;
    means[a] = m / N;
    if (means[a] > means[chosen]) chosen = a;
  }
  double ss = 0.0;
  for (double x : draws[chosen]) ss += (x - means[chosen]) * (x - means[chosen]);
  return {gamma * means[chosen], ss / (N - 1), chosen};
}

double overestimation_lower_bound(double gamma, double sigma, int k, int N) {
  if (k < 1 || N < 1) throw std::invalid_argument("overestimation_lower_bound: need k, N >= 1");
  return gamma * sigma * std::sqrt(std::log(static_cast<double>(k))) /
         (std::sqrt(std::numbers::pi * std::numbers::ln2) * std::sqrt(static_cast<double>(N)));
}

std::pair<double, double> gaussian_max_mean_bounds(int k, double sigma) {
  if (k < 2) throw std::invalid_argument("gaussian_max_mean_bounds: need k >= 2");
  const double lk = std::log(static_cast<double>(k));
  return {sigma * std::sqrt(lk / (std::numbers::pi * std::numbers::ln2)),
          sigma * std::sqrt(2.0 * lk)};
}

namespace {

struct Moments {
  double mean;
  double variance;  // unbiased
  double m4;        // fourth central moment
};

Moments moments(const std::vector<double>& xs) {
  const double n = static_cast<double>(xs.size());
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= n;
  double m2 = 0.0;
  double m4 = 0.0;
  for (double x : xs) {
    const double d2 = (x - mean) * (x - mean);
    m2 += d2;
    m4 += d2 * d2;
  }
  return {mean, m2 / (n - 1.0), m4 / n};
}

}  // namespace

bool VarianceLawCheck::mean_passed() const {
  return std::abs(mean - sigma * sigma) <= mean_tolerance;
}

bool VarianceLawCheck::variance_passed() const {
  return std::abs(variance - expected_variance) <= 3.0 * variance_stderr;
}

VarianceLawCheck verify_variance_law(int k, double sigma, int N, int replicates,
                                     std::uint64_t seed) {
  if (replicates < 500) throw std::invalid_argument("verify_variance_law: need >= 500 replicates");
  if (!(sigma > 0.0)) throw std::invalid_argument("verify_variance_law: need sigma > 0");
  VarianceLawCheck c{};
  c.k = k;
  c.sigma = sigma;
  c.N = N;
  c.replicates = replicates;
  c.s2.reserve(replicates);
  for (int i = 0; i < replicates; ++i) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
    c.s2.push_back(cyclic_target_estimator({k, 0.0, sigma}, N, 1.0, rng).s2_chosen);
  }
  const double s2 = sigma * sigma;
  c.ks = ks_test(c.s2, [&](double x) { return x <= 0.0 ? 0.0 : chi2_cdf((N - 1) * x / s2, N - 1); });
  const Moments m = moments(c.s2);
  c.mean = m.mean;
  c.mean_tolerance = 3.0 * s2 * std::sqrt(2.0 / (N - 1)) / std::sqrt(static_cast<double>(replicates));
  c.variance = m.variance;
  c.variance_stderr = std::sqrt(std::max(0.0, m.m4 - m.variance * m.variance) / replicates);
  c.expected_variance = 2.0 * s2 * s2 / (N - 1);
  return c;
}

BoundCheck verify_bias_bound(double gamma, double sigma, int k, int N, int replicates,
                             std::uint64_t seed) {
  if (replicates < 500) throw std::invalid_argument("verify_bias_bound: need >= 500 replicates");
  BoundCheck c{};
  c.gamma = gamma;
  c.sigma = sigma;
  c.k = k;
  c.N = N;
  c.n_replicates = replicates;
  c.lower_bound = overestimation_lower_bound(gamma, sigma, k, N);
  c.q_hat.reserve(replicates);
  // Arms are centered, so the bias is q_hat itself.
  for (int i = 0; i < replicates; ++i) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
    c.q_hat.push_back(cyclic_target_estimator({k, 0.0, sigma}, N, gamma, rng).q_hat);
  }
  const Moments m = moments(c.q_hat);
  c.empirical_mean_bias = m.mean;
  c.standard_error = std::sqrt(m.variance / replicates);
  return c;
}

void write_report(std::ostream& out, const VarianceLawCheck& c) {
  const auto old = out.precision(9);
  out << "variance_law k=" << c.k << " sigma=" << c.sigma << " N=" << c.N
      << " replicates=" << c.replicates << '\n'
      << "  ks_statistic " << c.ks.statistic << " p_value " << c.ks.p_value
      << (c.ks_passed() ? " PASS" : " FAIL") << '\n'
      << "  mean " << c.mean << " expected " << c.sigma * c.sigma << " tolerance "
      << c.mean_tolerance << (c.mean_passed() ? " PASS" : " FAIL") << '\n'
      << "  variance " << c.variance << " expected " << c.expected_variance << " stderr "
      << c.variance_stderr << (c.variance_passed() ? " PASS" : " FAIL") << '\n';
  out.precision(old);
}

void write_report(std::ostream& out, const BoundCheck& c) {
  const auto old = out.precision(9);
  out << "bias_bound gamma=" << c.gamma << " sigma=" << c.sigma << " k=" << c.k << " N=" << c.N
      << " replicates=" << c.n_replicates << '\n'
      << "  mean_bias " << c.empirical_mean_bias << " stderr " << c.standard_error
      << " lower_bound " << c.lower_bound << (c.passed() ? " PASS" : " FAIL") << '\n';
  out.precision(old);
}

}  // namespace addq
