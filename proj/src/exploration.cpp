#include "addq/exploration.hpp"

#include <algorithm>
#include <stdexcept>

#include "addq/updates.hpp"

namespace addq {

double EpsGreedyLinear::epsilon(long step) const {
  if (decay_steps <= 0) return eps_end;
  const double frac = static_cast<double>(step) / static_cast<double>(decay_steps);
  return std::max(eps_end, eps_start - (eps_start - eps_end) * frac);
}

void validate(const ExplorationPolicy& policy) {
  if (const auto* eps = std::get_if<EpsGreedyLinear>(&policy)) {
    if (!(eps->eps_end >= 0.0 && eps->eps_end <= eps->eps_start && eps->eps_start <= 1.0))
      throw std::invalid_argument("exploration: need 0 <= eps_end <= eps_start <= 1");
    if (eps->decay_steps < 0) throw std::invalid_argument("exploration: negative decay_steps");
  }
}

int act(const ExplorationPolicy& policy, std::span<const double> values, long step, Rng& rng) {
  if (values.empty()) throw std::invalid_argument("act: no actions");
  std::uniform_int_distribution<int> uniform(0, static_cast<int>(values.size()) - 1);
  if (std::holds_alternative<UniformExploration>(policy)) return uniform(rng);

  const double eps = std::get<EpsGreedyLinear>(policy).epsilon(step);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  if (unit(rng) < eps) return uniform(rng);
  return select_greedy(values);
}

}  // namespace addq
