#pragma once

#include <span>
#include <vector>

#include "addq/environment.hpp"
#include "addq/random.hpp"
#include "addq/tables.hpp"

namespace addq {

/// Step size 1 / n for the n-th visit (count taken after the increment).
double stepsize(int visit_count);

/// Index of the largest value; ties go to the lowest index.
int select_greedy(std::span<const double> values);

/// Index of the smallest value; ties go to the lowest index.
int select_lowest(std::span<const double> values);

/// Records a visit of (s, a) and moves Q(s, a) toward `target` with step 1/n.
void apply_target(QTable& q, int s, int a, double target);

/// Which of two estimators receives the update.
enum class Side { A, B };

/// Fair coin.
Side draw_side(Rng& rng);

// ---------------------------------------------------------------------------
// Bootstrap values. All of them are the value of the next state before
// discounting and are only meaningful for non-terminal next states.

/// max_a' Q(s', a')
double max_bootstrap(const QTable& q, int next);

/// other(s', z*) with z* = argmax of `updated` at s'.
double double_q_bootstrap(const QTable& updated, const QTable& other, int next);

/// min(updated(s', z*), other(s', z*)) with z* = argmax of `updated` at s'.
double clipped_bootstrap(const QTable& updated, const QTable& other, int next);

/// Weight of the own-table term in weighted double Q-learning:
/// gap / (c + gap).
double wdq_weight(double gap, double c);

/// w * updated(s', z*) + (1 - w) * other(s', z*), with z* and a_L the argmax
/// and argmin of `updated` at s', and w = wdq_weight(|other(s', z*) -
/// other(s', a_L)|, c).
double wdq_bootstrap(const QTable& updated, const QTable& other, int next, double c);

// ---------------------------------------------------------------------------
// Scalar learners. Terminal next states bootstrap with 0.

void ql_update(QTable& q, const Transition& tr, double gamma);

/// Updates `updated` with a target evaluated by `other`; the coin-free core of
/// the double estimators.
void double_q_step(QTable& updated, const QTable& other, const Transition& tr, double gamma);
void clipped_step(QTable& updated, const QTable& other, const Transition& tr, double gamma);
void wdq_step(QTable& updated, const QTable& other, const Transition& tr, double gamma, double c);

/// Fair coin picks the table to update, then applies the corresponding step.
Side dql_update(QTable& a, QTable& b, const Transition& tr, double gamma, Rng& rng);
Side clipped_update(QTable& a, QTable& b, const Transition& tr, double gamma, Rng& rng);
Side wdq_update(QTable& a, QTable& b, const Transition& tr, double gamma, double c, Rng& rng);

/// K scalar tables for Maxmin / EBQL / REDQ. subset_size is only used by REDQ.
class EnsembleState {
 public:
  EnsembleState(const TabularModel& model, int size, int subset_size = 1);

  int size() const { return static_cast<int>(tables_.size()); }
  int subset_size() const { return subset_size_; }
  const QTable& table(int k) const { return tables_.at(k); }
  QTable& table(int k) { return tables_.at(k); }

  /// min_k Q_k(s, .) elementwise.
  std::vector<double> min_row(int s) const;
  /// (1/K) sum_k Q_k(s, .) elementwise.
  std::vector<double> mean_row(int s) const;

 private:
  std::vector<QTable> tables_;
  int subset_size_;
};

/// max_a' min_{k in members} Q_k(s', a').
double min_max_bootstrap(const EnsembleState& ens, std::span<const int> members, int next);

/// Average over all tables except `chosen`, evaluated at argmax of `chosen`.
double ebql_bootstrap(const EnsembleState& ens, int chosen, int next);

/// Updates one uniformly chosen table toward r + gamma * max min_k Q_k(s', .).
/// Returns the index of the updated table.
int maxmin_update(EnsembleState& ens, const Transition& tr, double gamma, Rng& rng);

/// Updates one uniformly chosen table toward the leave-one-out average.
int ebql_update(EnsembleState& ens, const Transition& tr, double gamma, Rng& rng);

/// Draws a random subset of size subset_size, builds the shared min-max target
/// from it and moves every table toward that target. Returns the subset.
std::vector<int> redq_update(EnsembleState& ens, const Transition& tr, double gamma, Rng& rng);

}  // namespace addq
