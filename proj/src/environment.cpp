#include "addq/environment.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace addq {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kProbabilityTolerance = 1e-12;

}  // namespace

double reward_mean(const RewardSpec& r) {
  return std::visit(overloaded{
                        [](const PointReward& p) { return p.value; },
                        [](const TwoPointReward& t) { return t.p1 * t.v1 + t.p2 * t.v2; },
                        [](const GaussianReward& g) { return g.mu; },
                    },
                    r);
}

double reward_variance(const RewardSpec& r) {
  return std::visit(overloaded{
                        [](const PointReward&) { return 0.0; },
                        [](const TwoPointReward& t) {
                          const double m = t.p1 * t.v1 + t.p2 * t.v2;
                          return t.p1 * (t.v1 - m) * (t.v1 - m) + t.p2 * (t.v2 - m) * (t.v2 - m);
                        },
                        [](const GaussianReward& g) { return g.sigma * g.sigma; },
                    },
                    r);
}

double sample_reward(const RewardSpec& r, Rng& rng) {
  return std::visit(overloaded{
                        [](const PointReward& p) { return p.value; },
                        [&](const TwoPointReward& t) {
                          std::bernoulli_distribution first(t.p1);
                          return first(rng) ? t.v1 : t.v2;
                        },
                        [&](const GaussianReward& g) {
                          if (g.sigma == 0.0) return g.mu;
                          std::normal_distribution<double> normal(g.mu, g.sigma);
                          return normal(rng);
                        },
                    },
                    r);
}

bool has_finite_support(const RewardSpec& r) { return !std::holds_alternative<GaussianReward>(r); }

AtomList reward_atoms(const RewardSpec& r) {
  return std::visit(overloaded{
                        [](const PointReward& p) { return AtomList{{p.value, 1.0}}; },
                        [](const TwoPointReward& t) { return AtomList{{t.v1, t.p1}, {t.v2, t.p2}}; },
                        [](const GaussianReward&) -> AtomList {
                          throw std::invalid_argument("Gaussian rewards have no finite atoms");
                        },
                    },
                    r);
}

TabularModel::TabularModel(BranchTable transitions, std::vector<bool> terminal, double gamma,
                           int start_state, int episode_cap)
    : transitions_(std::move(transitions)),
      terminal_(std::move(terminal)),
      gamma_(gamma),
      start_state_(start_state),
      episode_cap_(episode_cap) {
  const int n = static_cast<int>(terminal_.size());
  if (static_cast<int>(transitions_.size()) != n)
    throw std::invalid_argument("TabularModel: transition table size != state count");
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("TabularModel: gamma must lie in (0,1)");
  if (start_state < 0 || start_state >= n || terminal_[start_state])
    throw std::invalid_argument("TabularModel: invalid start state");
  if (episode_cap < 1) throw std::invalid_argument("TabularModel: episode cap must be positive");

  offsets_.assign(n + 1, 0);
  for (int s = 0; s < n; ++s) {
    const int actions = static_cast<int>(transitions_[s].size());
    if (terminal_[s] && actions != 0)
      throw std::invalid_argument("TabularModel: terminal state with actions");
    if (!terminal_[s] && actions == 0)
      throw std::invalid_argument("TabularModel: non-terminal state without actions");
    offsets_[s + 1] = offsets_[s] + actions;
    for (const auto& branches : transitions_[s]) {
      double total = 0.0;
      for (const Branch& b : branches) {
        if (b.next_state < 0 || b.next_state >= n)
          throw std::invalid_argument("TabularModel: next state out of range");
        if (b.terminal != terminal_[b.next_state])
          throw std::invalid_argument("TabularModel: branch terminal flag disagrees with state");
        if (b.probability < 0.0) throw std::invalid_argument("TabularModel: negative probability");
        total += b.probability;
      }
      if (std::abs(total - 1.0) > kProbabilityTolerance)
        throw std::invalid_argument("TabularModel: branch probabilities do not sum to 1");
    }
  }
}

bool TabularModel::has_finite_rewards() const {
  for (const auto& state : transitions_)
    for (const auto& branches : state)
      for (const Branch& b : branches)
        if (!has_finite_support(b.reward)) return false;
  return true;
}

TabularModel bandit_model(const BanditSpec& spec) {
  if (spec.k1 < 1 || spec.k2 < 1) throw std::invalid_argument("bandit: k1 and k2 must be >= 1");
  if (spec.sigma1 < 0.0 || spec.sigma2 < 0.0)
    throw std::invalid_argument("bandit: sigmas must be non-negative");
  using namespace bandit;
  TabularModel::BranchTable t(4);
  t[kStart] = {
      {{1.0, PointReward{0.0}, kLeftState, false}},
      {{1.0, PointReward{0.0}, kRightState, false}},
      {{1.0, PointReward{0.0}, kTerminal, true}},
  };
  t[kLeftState].assign(spec.k1, {{1.0, GaussianReward{spec.mu1, spec.sigma1}, kTerminal, true}});
  t[kRightState].assign(spec.k2, {{1.0, GaussianReward{spec.mu2, spec.sigma2}, kTerminal, true}});
  return TabularModel(std::move(t), {false, false, false, true}, spec.gamma, kStart, 100);
}

namespace grid {

bool in_stochastic_region(int cell) {
  return std::find(kStochasticRegion.begin(), kStochasticRegion.end(), cell) !=
         kStochasticRegion.end();
}

int move(int cell, int action) {
  const int row = cell / kSide;
  const int col = cell % kSide;
  switch (action) {
    case kUp: return row > 0 ? cell - kSide : cell;
    case kDown: return row < kSide - 1 ? cell + kSide : cell;
    case kLeft: return col > 0 ? cell - 1 : cell;
    case kRight: return col < kSide - 1 ? cell + 1 : cell;
  }
  throw std::invalid_argument("grid: unknown action");
}

RewardSpec cell_reward(int cell) {
  if (cell == kGoal) return PointReward{kGoalReward};
  if (cell == kFakeGoal) return PointReward{kFakeGoalReward};
  if (in_stochastic_region(cell)) return TwoPointReward{-2.1, 0.5, 2.0, 0.5};
  return TwoPointReward{-0.05, 0.5, 0.05, 0.5};
}

}  // namespace grid

TabularModel gridworld_model(const GridWorldSpec& spec) {
  using namespace grid;
  constexpr int n = kSide * kSide;
  TabularModel::BranchTable t(n);
  std::vector<bool> terminal(n, false);
  terminal[kGoal] = true;
  terminal[kFakeGoal] = true;
  for (int s = 0; s < n; ++s) {
    if (terminal[s]) continue;
    for (int a = 0; a < 4; ++a) {
      const int next = move(s, a);
      t[s].push_back({{1.0, cell_reward(next), next, terminal[next]}});
    }
  }
  return TabularModel(std::move(t), std::move(terminal), spec.gamma, kStart, spec.step_cap);
}

Transition sample_transition(const TabularModel& model, int s, int a, Rng& rng) {
  if (s < 0 || s >= model.num_states() || model.is_terminal(s))
    throw std::out_of_range("sample_transition: invalid state " + std::to_string(s));
  if (a < 0 || a >= model.num_actions(s))
    throw std::out_of_range("sample_transition: invalid action " + std::to_string(a));
  const auto branches = model.branches(s, a);
  std::size_t chosen = 0;
  if (branches.size() > 1) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double u = unit(rng);
    while (chosen + 1 < branches.size() && u >= branches[chosen].probability) {
      u -= branches[chosen].probability;
      ++chosen;
    }
  }
  const Branch& b = branches[chosen];
  return {s, a, sample_reward(b.reward, rng), b.next_state, b.terminal};
}

std::vector<Transition> run_episode(const TabularModel& model, const Policy& policy, int start,
                                    int step_cap, Rng& rng) {
  std::vector<Transition> trajectory;
  int s = start;
  for (int step = 0; step < step_cap && !model.is_terminal(s); ++step) {
    const Transition tr = sample_transition(model, s, policy(s), rng);
    trajectory.push_back(tr);
    s = tr.next_state;
  }
  return trajectory;
}

void write_model_table(std::ostream& out, const TabularModel& model) {
  const auto old_precision = out.precision(17);
  out << "s\ta\tprob\treward_kind\tparams\ts_next\tterminal\n";
  for (int s = 0; s < model.num_states(); ++s) {
    for (int a = 0; a < model.num_actions(s); ++a) {
      for (const Branch& b : model.branches(s, a)) {
        out << s << '\t' << a << '\t' << b.probability << '\t';
        std::visit(overloaded{
                       [&](const PointReward& p) { out << "point\t" << p.value; },
                       [&](const TwoPointReward& r) {
                         out << "two_point\t" << r.v1 << ',' << r.p1 << ',' << r.v2 << ',' << r.p2;
                       },
                       [&](const GaussianReward& g) { out << "gaussian\t" << g.mu << ',' << g.sigma; },
                   },
                   b.reward);
        out << '\t' << b.next_state << '\t' << (b.terminal ? 1 : 0) << '\n';
      }
    }
  }
  out.precision(old_precision);
}

}  // namespace addq
