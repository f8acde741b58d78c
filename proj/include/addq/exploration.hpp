#pragma once

#include <span>
#include <variant>

#include "addq/random.hpp"

namespace addq {

/// epsilon decays linearly from eps_start to eps_end over decay_steps, then
/// stays at eps_end.
struct EpsGreedyLinear {
  double eps_start = 1.0;
  double eps_end = 0.1;
  long decay_steps = 10000;

  double epsilon(long step) const;
};

struct UniformExploration {};

using ExplorationPolicy = std::variant<EpsGreedyLinear, UniformExploration>;

void validate(const ExplorationPolicy& policy);

/// Behaviour action at environment step `step` (0-based) given the learner's
/// current action values.
int act(const ExplorationPolicy& policy, std::span<const double> values, long step, Rng& rng);

}  // namespace addq
