#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "addq/distribution.hpp"
#include "addq/environment.hpp"
#include "addq/tables.hpp"

namespace addq {

struct ValueIterationResult {
  QTable q;
  /// Sup-norm change of each sweep.
  std::vector<double> residuals;
};

/// Iterates the optimality operator until the sup-norm change drops below
/// tol * (1 - gamma) / gamma, so that |Q - Q*|_inf < tol. Gaussian rewards
/// enter through their mean. Throws std::runtime_error after 1e6 sweeps.
ValueIterationResult value_iteration(const TabularModel& model, double tol = 1e-10);

/// sup_{s,a} |T*Q(s,a) - Q(s,a)|.
double bellman_residual(const TabularModel& model, const QTable& q);

/// Q^pi from the linear system (I - gamma P_pi) Q = r.
QTable policy_evaluation(const TabularModel& model, const Policy& policy);

/// Greedy policy of q, lowest index on ties. Terminal states map to -1.
Policy greedy_policy(const QTable& q);

/// Per state, every action within `tie_tol` of the row maximum. Empty for
/// terminal states.
std::vector<std::vector<int>> greedy_sets(const QTable& q, double tie_tol = 1e-9);

/// Smallest gap between the best and second-best action value over states
/// with at least two actions; +inf if there are none.
double min_action_gap(const QTable& q);

struct FixedPointResult {
  ReturnTable eta;
  /// sup over pairs of the Cramer distance between consecutive iterates.
  std::vector<double> distances;
};

/// Iterates eta <- Pi_C T^pi eta from delta_0 until the sup-l2 change drops
/// below tol. Requires Point/TwoPoint rewards (throws std::invalid_argument
/// otherwise) and throws std::runtime_error after max_sweeps.
FixedPointResult categorical_fixed_point(const TabularModel& model, const Policy& policy,
                                         const Support& support, double tol = 1e-10,
                                         int max_sweeps = 100000);

struct BiasReport {
  std::vector<double> bias;  // per pair, in model pair order
  double summed_abs_bias = 0.0;
  double max_abs_bias = 0.0;
  /// Per state: greedy action of the estimate lies in the greedy set of q_star.
  /// Always true for terminal states.
  std::vector<bool> greedy_agrees;
};

/// `q_est` holds one value per pair in model pair order. Throws
/// std::invalid_argument on a shape mismatch.
BiasReport bias_report(const TabularModel& model, std::span<const double> q_est,
                       const QTable& q_star);

/// "state\taction\tvalue" rows, 17 significant digits.
void write_q_tsv(std::ostream& out, const TabularModel& model, const QTable& q);

/// "state\taction\tlocation\tweight" rows for every atom.
void write_return_tsv(std::ostream& out, const TabularModel& model, const ReturnTable& eta);

}  // namespace addq
