#pragma once

#include <span>
#include <vector>

#include "addq/distribution.hpp"
#include "addq/environment.hpp"

namespace addq {

/// Per-state action counts, shared by every table of a model.
class TableLayout {
 public:
  explicit TableLayout(const TabularModel& model);

  int num_states() const { return static_cast<int>(offsets_.size()) - 1; }
  int num_actions(int s) const { return offsets_[s + 1] - offsets_[s]; }
  int num_pairs() const { return offsets_.back(); }
  int pair(int s, int a) const { return offsets_[s] + a; }

  bool operator==(const TableLayout&) const = default;

 private:
  std::vector<int> offsets_;
};

/// Scalar state-action values with per-pair visit counts.
class QTable {
 public:
  explicit QTable(const TabularModel& model, double initial = 0.0);

  const TableLayout& layout() const { return layout_; }
  int num_actions(int s) const { return layout_.num_actions(s); }

  double value(int s, int a) const { return values_[layout_.pair(s, a)]; }
  void set(int s, int a, double v) { values_[layout_.pair(s, a)] = v; }
  /// Values of all actions at s; empty for terminal states.
  std::span<const double> row(int s) const;
  std::span<const double> values() const { return values_; }

  int visits(int s, int a) const { return visits_[layout_.pair(s, a)]; }
  /// Increments the visit count of (s, a) and returns the new count.
  int record_visit(int s, int a) { return ++visits_[layout_.pair(s, a)]; }

 private:
  TableLayout layout_;
  std::vector<double> values_;
  std::vector<int> visits_;
};

/// Return distribution per state-action pair with visit counts. Means and
/// variances are cached on every write.
class ReturnTable {
 public:
  ReturnTable(const TabularModel& model, const FiniteDistribution& initial);

  const TableLayout& layout() const { return layout_; }
  int num_actions(int s) const { return layout_.num_actions(s); }

  const FiniteDistribution& at(int s, int a) const { return dists_[layout_.pair(s, a)]; }
  void set(int s, int a, FiniteDistribution d);

  double mean(int s, int a) const { return means_[layout_.pair(s, a)]; }
  double variance(int s, int a) const { return variances_[layout_.pair(s, a)]; }
  std::span<const double> means(int s) const;
  std::span<const double> variances(int s) const;

  int visits(int s, int a) const { return visits_[layout_.pair(s, a)]; }
  int record_visit(int s, int a) { return ++visits_[layout_.pair(s, a)]; }

 private:
  TableLayout layout_;
  std::vector<FiniteDistribution> dists_;
  std::vector<double> means_;
  std::vector<double> variances_;
  std::vector<int> visits_;
};

}  // namespace addq
