#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "addq/distribution.hpp"
#include "addq/random.hpp"

namespace addq {

struct PointReward {
  double value;
};

struct TwoPointReward {
  double v1;
  double p1;
  double v2;
  double p2;
};

struct GaussianReward {
  double mu;
  double sigma;
};

using RewardSpec = std::variant<PointReward, TwoPointReward, GaussianReward>;

double reward_mean(const RewardSpec& r);
double reward_variance(const RewardSpec& r);
double sample_reward(const RewardSpec& r, Rng& rng);
bool has_finite_support(const RewardSpec& r);
/// Atoms of a Point/TwoPoint reward; throws std::invalid_argument for Gaussian.
AtomList reward_atoms(const RewardSpec& r);

/// One outcome of playing (s, a).
struct Branch {
  double probability;
  RewardSpec reward;
  int next_state;
  bool terminal;
};

/// One observed step of interaction.
struct Transition {
  int state;
  int action;
  double reward;
  int next_state;
  bool terminal;
};

/// Exact description of a finite MDP. Terminal states have no actions, are
/// absorbing, and carry value zero. State-action pairs are numbered densely
/// in (state, action) order; tables indexed by pair() share this layout.
class TabularModel {
 public:
  using BranchTable = std::vector<std::vector<std::vector<Branch>>>;

  TabularModel(BranchTable transitions, std::vector<bool> terminal, double gamma,
               int start_state, int episode_cap);

  int num_states() const { return static_cast<int>(terminal_.size()); }
  int num_actions(int s) const { return static_cast<int>(transitions_.at(s).size()); }
  bool is_terminal(int s) const { return terminal_.at(s); }
  double gamma() const { return gamma_; }
  int start_state() const { return start_state_; }
  int episode_cap() const { return episode_cap_; }
  std::span<const Branch> branches(int s, int a) const { return transitions_.at(s).at(a); }

  int num_pairs() const { return offsets_.back(); }
  int pair(int s, int a) const { return offsets_[s] + a; }
  int first_pair(int s) const { return offsets_[s]; }

  bool has_finite_rewards() const;

 private:
  BranchTable transitions_;
  std::vector<bool> terminal_;
  std::vector<int> offsets_;
  double gamma_;
  int start_state_;
  int episode_cap_;
};

/// Two-sided bandit MDP: s0 --left--> s1 (k1 Gaussian arms), s0 --right--> s2
/// (k2 Gaussian arms), s0 --down--> terminal. Side rewards are zero.
struct BanditSpec {
  int k1 = 10;
  int k2 = 5;
  double mu1 = -0.1;
  double mu2 = 0.1;
  double sigma1 = 5.0;
  double sigma2 = 1.0;
  double gamma = 0.9;
};

namespace bandit {
inline constexpr int kStart = 0;
inline constexpr int kLeftState = 1;
inline constexpr int kRightState = 2;
inline constexpr int kTerminal = 3;
inline constexpr int kLeft = 0;
inline constexpr int kRight = 1;
inline constexpr int kDown = 2;
}  // namespace bandit

TabularModel bandit_model(const BanditSpec& spec);

/// 4x4 grid, cells numbered row-major from the top-left:
///
///   F  1  2  S
///   4  5  6  7
///   8  9  10 11
///   12 G  14 15
///
/// {10, 11, 14, 15} is the high-variance region. Moves are deterministic;
/// the reward is drawn from the destination cell.
struct GridWorldSpec {
  double gamma = 0.9;
  int step_cap = 100;
};

namespace grid {
inline constexpr int kSide = 4;
inline constexpr int kStart = 3;
inline constexpr int kGoal = 13;
inline constexpr int kFakeGoal = 0;
inline constexpr double kGoalReward = 1.0;
inline constexpr double kFakeGoalReward = 0.65;
inline constexpr std::array<int, 4> kStochasticRegion = {10, 11, 14, 15};
inline constexpr int kUp = 0;
inline constexpr int kDown = 1;
inline constexpr int kLeft = 2;
inline constexpr int kRight = 3;

bool in_stochastic_region(int cell);
/// Cell reached by `action` from `cell`; off-grid moves stay in place.
int move(int cell, int action);
/// Reward law for entering `cell`.
RewardSpec cell_reward(int cell);
}  // namespace grid

TabularModel gridworld_model(const GridWorldSpec& spec);

/// Draws one branch of p(. | s, a) and its reward.
Transition sample_transition(const TabularModel& model, int s, int a, Rng& rng);

using Policy = std::function<int(int state)>;

/// Rolls out from `start` until a terminal state or `step_cap` steps.
std::vector<Transition> run_episode(const TabularModel& model, const Policy& policy, int start,
                                    int step_cap, Rng& rng);

/// Plain-text dump, one row per transition branch:
///   s  a  prob  reward_kind  params  s_next  terminal
/// Columns are tab-separated; params is a comma-separated list
/// (point: value; two_point: v1,p1,v2,p2; gaussian: mu,sigma).
void write_model_table(std::ostream& out, const TabularModel& model);

}  // namespace addq
