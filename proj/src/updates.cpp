#include "addq/updates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace addq {

double stepsize(int visit_count) {
  if (visit_count < 1) throw std::invalid_argument("stepsize: visit count must be >= 1");
  return 1.0 / visit_count;
}

int select_greedy(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("select_greedy: no actions");
  return static_cast<int>(std::max_element(values.begin(), values.end()) - values.begin());
}

int select_lowest(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("select_lowest: no actions");
  return static_cast<int>(std::min_element(values.begin(), values.end()) - values.begin());
}

void apply_target(QTable& q, int s, int a, double target) {
  const double alpha = stepsize(q.record_visit(s, a));
  q.set(s, a, (1.0 - alpha) * q.value(s, a) + alpha * target);
}

Side draw_side(Rng& rng) {
  std::bernoulli_distribution coin(0.5);
  return coin(rng) ? Side::A : Side::B;
}

double max_bootstrap(const QTable& q, int next) {
  const auto row = q.row(next);
  return row[select_greedy(row)];
}

double double_q_bootstrap(const QTable& updated, const QTable& other, int next) {
  return other.value(next, select_greedy(updated.row(next)));
}

double clipped_bootstrap(const QTable& updated, const QTable& other, int next) {
  const int z = select_greedy(updated.row(next));
  return std::min(updated.value(next, z), other.value(next, z));
}

double wdq_weight(double gap, double c) {
  if (!(c > 0.0)) throw std::invalid_argument("wdq_weight: c must be positive");
  if (std::isinf(gap)) return 1.0;
  return gap / (c + gap);
}

double wdq_bootstrap(const QTable& updated, const QTable& other, int next, double c) {
  const auto row = updated.row(next);
  const int z = select_greedy(row);
  const int low = select_lowest(row);
  const double w = wdq_weight(std::abs(other.value(next, z) - other.value(next, low)), c);
  return w * updated.value(next, z) + (1.0 - w) * other.value(next, z);
}

void ql_update(QTable& q, const Transition& tr, double gamma) {
  const double boot = tr.terminal ? 0.0 : max_bootstrap(q, tr.next_state);
  apply_target(q, tr.state, tr.action, tr.reward + gamma * boot);
}

void double_q_step(QTable& updated, const QTable& other, const Transition& tr, double gamma) {
  const double boot = tr.terminal ? 0.0 : double_q_bootstrap(updated, other, tr.next_state);
  apply_target(updated, tr.state, tr.action, tr.reward + gamma * boot);
}

void clipped_step(QTable& updated, const QTable& other, const Transition& tr, double gamma) {
  const double boot = tr.terminal ? 0.0 : clipped_bootstrap(updated, other, tr.next_state);
  apply_target(updated, tr.state, tr.action, tr.reward + gamma * boot);
}

void wdq_step(QTable& updated, const QTable& other, const Transition& tr, double gamma, double c) {
  const double boot = tr.terminal ? 0.0 : wdq_bootstrap(updated, other, tr.next_state, c);
  apply_target(updated, tr.state, tr.action, tr.reward + gamma * boot);
}

Side dql_update(QTable& a, QTable& b, const Transition& tr, double gamma, Rng& rng) {
  const Side side = draw_side(rng);
  if (side == Side::A) double_q_step(a, b, tr, gamma);
  else double_q_step(b, a, tr, gamma);
  return side;
}

Side clipped_update(QTable& a, QTable& b, const Transition& tr, double gamma, Rng& rng) {
  const Side side = draw_side(rng);
  if (side == Side::A) clipped_step(a, b, tr, gamma);
  else clipped_step(b, a, tr, gamma);
  return side;
}

Side wdq_update(QTable& a, QTable& b, const Transition& tr, double gamma, double c, Rng& rng) {
  const Side side = draw_side(rng);
  if (side == Side::A) wdq_step(a, b, tr, gamma, c);
  else wdq_step(b, a, tr, gamma, c);
  return side;
}

EnsembleState::EnsembleState(const TabularModel& model, int size, int subset_size)
    : subset_size_(subset_size) {
  if (size < 2) throw std::invalid_argument("ensemble needs at least 2 tables");
  if (subset_size < 1 || subset_size > size)
    throw std::invalid_argument("ensemble subset size must lie in [1, K]");
  tables_.assign(size, QTable(model));
}

std::vector<double> EnsembleState::min_row(int s) const {
  const auto first = tables_[0].row(s);
  std::vector<double> out(first.begin(), first.end());
  for (std::size_t k = 1; k < tables_.size(); ++k) {
    const auto row = tables_[k].row(s);
    for (std::size_t a = 0; a < out.size(); ++a) out[a] = std::min(out[a], row[a]);
  }
  return out;
}

std::vector<double> EnsembleState::mean_row(int s) const {
  std::vector<double> out(tables_[0].num_actions(s), 0.0);
  for (const QTable& t : tables_) {
    const auto row = t.row(s);
    for (std::size_t a = 0; a < out.size(); ++a) out[a] += row[a];
  }
  for (double& v : out) v /= static_cast<double>(tables_.size());
  return out;
}

double min_max_bootstrap(const EnsembleState& ens, std::span<const int> members, int next) {
  if (members.empty()) throw std::invalid_argument("min_max_bootstrap: empty subset");
  const int actions = ens.table(members[0]).num_actions(next);
  double best = -std::numeric_limits<double>::infinity();
  for (int a = 0; a < actions; ++a) {
    double low = std::numeric_limits<double>::infinity();
    for (int k : members) low = std::min(low, ens.table(k).value(next, a));
    best = std::max(best, low);
  }
  return best;
}

double ebql_bootstrap(const EnsembleState& ens, int chosen, int next) {
  const int z = select_greedy(ens.table(chosen).row(next));
  double sum = 0.0;
  for (int k = 0; k < ens.size(); ++k)
    if (k != chosen) sum += ens.table(k).value(next, z);
  return sum / (ens.size() - 1);
}

int maxmin_update(EnsembleState& ens, const Transition& tr, double gamma, Rng& rng) {
  std::uniform_int_distribution<int> pick(0, ens.size() - 1);
  const int k = pick(rng);
  double boot = 0.0;
  if (!tr.terminal) {
    std::vector<int> all(ens.size());
    std::iota(all.begin(), all.end(), 0);
    boot = min_max_bootstrap(ens, all, tr.next_state);
  }
  apply_target(ens.table(k), tr.state, tr.action, tr.reward + gamma * boot);
  return k;
}

int ebql_update(EnsembleState& ens, const Transition& tr, double gamma, Rng& rng) {
  std::uniform_int_distribution<int> pick(0, ens.size() - 1);
  const int k = pick(rng);
  const double boot = tr.terminal ? 0.0 : ebql_bootstrap(ens, k, tr.next_state);
  apply_target(ens.table(k), tr.state, tr.action, tr.reward + gamma * boot);
  return k;
}

std::vector<int> redq_update(EnsembleState& ens, const Transition& tr, double gamma, Rng& rng) {
  std::vector<int> all(ens.size());
  std::iota(all.begin(), all.end(), 0);
  std::vector<int> subset;
  subset.reserve(ens.subset_size());
  std::sample(all.begin(), all.end(), std::back_inserter(subset), ens.subset_size(), rng);
  const double boot = tr.terminal ? 0.0 : min_max_bootstrap(ens, subset, tr.next_state);
  const double target = tr.reward + gamma * boot;
  for (int k = 0; k < ens.size(); ++k) apply_target(ens.table(k), tr.state, tr.action, target);
  return subset;
}

}  // namespace addq
