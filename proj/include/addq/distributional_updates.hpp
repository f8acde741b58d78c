#pragma once

#include <variant>
#include <vector>

#include "addq/beta_schedule.hpp"
#include "addq/distribution.hpp"
#include "addq/environment.hpp"
#include "addq/random.hpp"
#include "addq/tables.hpp"
#include "addq/updates.hpp"

namespace addq {

struct QuantileRepresentation {
  int atoms;
  bool operator==(const QuantileRepresentation&) const = default;
};

/// Parametrization every target is projected onto.
using Representation = std::variant<Support, QuantileRepresentation>;

/// Point mass at `location` in the given representation (delta_0 by default).
FiniteDistribution initial_distribution(const Representation& repr, double location = 0.0);

FiniteDistribution project(const AtomList& atoms, const Representation& repr);

/// (1 - alpha) * current + alpha * target. Categorical measures mix
/// componentwise; quantile measures are mixed and re-projected.
FiniteDistribution blend(const FiniteDistribution& current, const FiniteDistribution& target,
                         double alpha);

/// S2_{s,a} / S2_s per action, with S2_{s,a} the A/B-averaged sample variance
/// and S2_s its mean over actions. All ones when S2_s == 0.
std::vector<double> relative_variance(const ReturnTable& a, const ReturnTable& b, int s);

/// Weight for the target at (s', a*): schedule(relative_variance(s')[a*]).
/// Symmetric in the two tables.
double adaptive_beta(const ReturnTable& a, const ReturnTable& b, int next, int greedy_action,
                     const BetaSchedule& schedule);

/// What one distributional update did; kept for diagnostics and tests.
struct DistUpdateInfo {
  Side side = Side::A;
  int greedy_action = -1;  // -1 for terminal next states
  double beta = 1.0;
  FiniteDistribution target;
};

/// One ADDQ step on `updated` with `other` as the second estimator:
///   a*     = argmax_a mean(updated(s', a))
///   beta   = adaptive_beta(updated, other, s', a*)   (pre-update tables)
///   nu     = beta * updated(s', a*) + (1 - beta) * other(s', a*)
///   target = project(pushforward(nu, r, gamma))
///   updated(s, a) <- (1 - alpha) updated(s, a) + alpha target
/// Terminal next states use nu = delta_0.
DistUpdateInfo addq_step(ReturnTable& updated, const ReturnTable& other, const Transition& tr,
                         double gamma, const BetaSchedule& schedule, const Representation& repr);

/// Fair coin, then addq_step on the chosen side.
DistUpdateInfo addq_update(ReturnTable& a, ReturnTable& b, const Transition& tr, double gamma,
                           const BetaSchedule& schedule, const Representation& repr, Rng& rng);

/// Single-table distributional Q-learning step.
DistUpdateInfo dist_ql_update(ReturnTable& eta, const Transition& tr, double gamma,
                              const Representation& repr);

/// ADDQ with beta pinned to 0.
DistUpdateInfo dist_dql_update(ReturnTable& a, ReturnTable& b, const Transition& tr, double gamma,
                               const Representation& repr, Rng& rng);

}  // namespace addq
