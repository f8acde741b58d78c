#include "addq/tables.hpp"

namespace addq {

TableLayout::TableLayout(const TabularModel& model) : offsets_(model.num_states() + 1, 0) {
  for (int s = 0; s < model.num_states(); ++s)
    offsets_[s + 1] = offsets_[s] + model.num_actions(s);
}

QTable::QTable(const TabularModel& model, double initial)
    : layout_(model), values_(layout_.num_pairs(), initial), visits_(layout_.num_pairs(), 0) {}

std::span<const double> QTable::row(int s) const {
  return std::span<const double>(values_).subspan(layout_.pair(s, 0), layout_.num_actions(s));
}

ReturnTable::ReturnTable(const TabularModel& model, const FiniteDistribution& initial)
    : layout_(model),
      dists_(layout_.num_pairs(), initial),
      means_(layout_.num_pairs(), addq::mean(initial)),
      variances_(layout_.num_pairs(), sample_variance(initial)),
      visits_(layout_.num_pairs(), 0) {}

void ReturnTable::set(int s, int a, FiniteDistribution d) {
  const int p = layout_.pair(s, a);
  means_[p] = addq::mean(d);
  variances_[p] = sample_variance(d);
  dists_[p] = std::move(d);
}

std::span<const double> ReturnTable::means(int s) const {
  return std::span<const double>(means_).subspan(layout_.pair(s, 0), layout_.num_actions(s));
}

std::span<const double> ReturnTable::variances(int s) const {
  return std::span<const double>(variances_).subspan(layout_.pair(s, 0), layout_.num_actions(s));
}

}  // namespace addq
