#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "addq/distributional_updates.hpp"
#include "addq/environment.hpp"
#include "addq/random.hpp"

namespace addq {

enum class Algorithm { ql, dql, clipped, wdq, maxmin, ebql, redq, dist_ql, dist_dql, addq };

std::string_view to_string(Algorithm a);
/// Throws std::invalid_argument for unknown names.
Algorithm parse_algorithm(std::string_view name);
bool is_distributional(Algorithm a);

/// Algorithm plus its hyperparameters. `representation` is empty for scalar
/// learners and required for distributional ones.
struct AlgorithmSpec {
  Algorithm algorithm = Algorithm::addq;
  std::string beta_schedule = "n3";
  int ensemble_size = 2;
  int subset_size = 1;
  double wdq_c = 10.0;
  std::optional<Representation> representation;

  /// Human-readable label, e.g. "addq[n3]", "maxmin[K=4]".
  std::string label() const;
};

/// Throws std::invalid_argument for incompatible combinations (e.g. ADDQ
/// without a distributional representation).
void validate(const AlgorithmSpec& spec);

/// A tabular learner driven one transition at a time.
///
/// action_values() is the learner's Q estimate: the table itself for single
/// estimators, the A/B average for double estimators, the elementwise minimum
/// for Maxmin and the ensemble average for EBQL/REDQ. It drives both the
/// behaviour policy and bias measurement.
class Learner {
 public:
  virtual ~Learner() = default;

  virtual void update(const Transition& tr, Rng& rng) = 0;
  virtual std::vector<double> action_values(int s) const = 0;

  virtual bool is_distributional() const { return false; }
  /// Per-action sample variance (A/B-averaged for double estimators); empty
  /// for scalar learners.
  virtual std::vector<double> action_variances(int /*s*/) const { return {}; }
};

std::unique_ptr<Learner> make_learner(const AlgorithmSpec& spec, const TabularModel& model);

}  // namespace addq
