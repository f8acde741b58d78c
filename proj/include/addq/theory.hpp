#pragma once

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "addq/random.hpp"
#include "addq/stats.hpp"

namespace addq {

/// One side of the bandit: k Gaussian arms N(mu, sigma^2).
struct ArmFamily {
  int k;
  double mu;
  double sigma;
};

struct CyclicEstimate {
  double q_hat;      // gamma * max_a sample_mean_a
  double s2_chosen;  // 1/(N-1) sample variance of the chosen arm, before discounting
  int chosen_arm;
};

/// Plays the k arms in rotation N times each, with the bootstrap source held
/// at zero, then performs the single backup at the side state. Throws
/// std::invalid_argument for N < 2 or k < 1.
CyclicEstimate cyclic_target_estimator(const ArmFamily& arms, int N, double gamma, Rng& rng);

/// gamma * sigma * sqrt(ln k) / (sqrt(pi ln 2) * sqrt(N)).
double overestimation_lower_bound(double gamma, double sigma, int k, int N);

/// (sigma sqrt(ln k / (pi ln 2)), sigma sqrt(2 ln k)): bounds on E[max] of k
/// centered N(0, sigma^2) variables. Throws for k < 2.
std::pair<double, double> gaussian_max_mean_bounds(int k, double sigma);

struct VarianceLawCheck {
  int k;
  double sigma;
  int N;
  int replicates;
  KsResult ks;
  double mean;            // empirical mean of s2_chosen
  double mean_tolerance;  // 3 sigma^2 sqrt(2/(N-1)) / sqrt(replicates)
  double variance;        // empirical variance of s2_chosen
  double variance_stderr;
  double expected_variance;  // 2 sigma^4 / (N-1)
  std::vector<double> s2;    // raw replicates

  bool ks_passed() const { return ks.p_value > 0.01; }
  bool mean_passed() const;
  bool variance_passed() const;
  bool passed() const { return ks_passed() && mean_passed() && variance_passed(); }
};

/// Tests s2_chosen against sigma^2/(N-1) chi^2_{N-1}. Needs replicates >= 500.
VarianceLawCheck verify_variance_law(int k, double sigma, int N, int replicates,
                                     std::uint64_t seed);

struct BoundCheck {
  double gamma;
  double sigma;
  int k;
  int N;
  double empirical_mean_bias;
  double standard_error;
  double lower_bound;
  int n_replicates;
  std::vector<double> q_hat;  // raw replicates

  /// empirical_mean_bias - 2 standard_error >= lower_bound
  bool passed() const { return empirical_mean_bias - 2.0 * standard_error >= lower_bound; }
};

/// Bias of q_hat against gamma * mu with mu = 0. Needs replicates >= 500.
BoundCheck verify_bias_bound(double gamma, double sigma, int k, int N, int replicates,
                             std::uint64_t seed);

void write_report(std::ostream& out, const VarianceLawCheck& c);
void write_report(std::ostream& out, const BoundCheck& c);

}  // namespace addq
