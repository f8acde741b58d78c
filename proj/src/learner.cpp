#include "addq/learner.hpp"

#include <array>
#include <sstream>
#include <stdexcept>

#include "addq/updates.hpp"

namespace addq {

namespace {

constexpr std::array<std::pair<Algorithm, std::string_view>, 10> kNames = {{
    {Algorithm::ql, "ql"},
    {Algorithm::dql, "dql"},
    {Algorithm::clipped, "clipped"},
    {Algorithm::wdq, "wdq"},
    {Algorithm::maxmin, "maxmin"},
    {Algorithm::ebql, "ebql"},
    {Algorithm::redq, "redq"},
    {Algorithm::dist_ql, "dist_ql"},
    {Algorithm::dist_dql, "dist_dql"},
    {Algorithm::addq, "addq"},
}};

std::vector<double> to_vector(std::span<const double> s) { return {s.begin(), s.end()}; }

class QLearner final : public Learner {
 public:
  explicit QLearner(const TabularModel& model) : q_(model), gamma_(model.gamma()) {}
  void update(const Transition& tr, Rng&) override { ql_update(q_, tr, gamma_); }
  std::vector<double> action_values(int s) const override { return to_vector(q_.row(s)); }

 private:
  QTable q_;
  double gamma_;
};

class DoubleQLearner final : public Learner {
 public:
  DoubleQLearner(const TabularModel& model, Algorithm kind, double c)
      : a_(model), b_(model), gamma_(model.gamma()), kind_(kind), c_(c) {}

  void update(const Transition& tr, Rng& rng) override {
    switch (kind_) {
      case Algorithm::dql: dql_update(a_, b_, tr, gamma_, rng); break;
      case Algorithm::clipped: clipped_update(a_, b_, tr, gamma_, rng); break;
      case Algorithm::wdq: wdq_update(a_, b_, tr, gamma_, c_, rng); break;
      default: throw std::logic_error("DoubleQLearner: unsupported algorithm");
    }
  }

  std::vector<double> action_values(int s) const override {
    const auto ra = a_.row(s);
    const auto rb = b_.row(s);
    std::vector<double> out(ra.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = 0.5 * (ra[i] + rb[i]);
    return out;
  }

 private:
  QTable a_;
  QTable b_;
  double gamma_;
  Algorithm kind_;
  double c_;
};

class EnsembleLearner final : public Learner {
 public:
  EnsembleLearner(const TabularModel& model, Algorithm kind, int size, int subset)
      : ens_(model, size, subset), gamma_(model.gamma()), kind_(kind) {}

  void update(const Transition& tr, Rng& rng) override {
    switch (kind_) {
      case Algorithm::maxmin: maxmin_update(ens_, tr, gamma_, rng); break;
      case Algorithm::ebql: ebql_update(ens_, tr, gamma_, rng); break;
      case Algorithm::redq: redq_update(ens_, tr, gamma_, rng); break;
      default: throw std::logic_error("EnsembleLearner: unsupported algorithm");
    }
  }

  std::vector<double> action_values(int s) const override {
    return kind_ == Algorithm::maxmin ? ens_.min_row(s) : ens_.mean_row(s);
  }

 private:
  EnsembleState ens_;
  double gamma_;
  Algorithm kind_;
};

class DistQLearner final : public Learner {
 public:
  DistQLearner(const TabularModel& model, Representation repr)
      : eta_(model, initial_distribution(repr)), repr_(std::move(repr)), gamma_(model.gamma()) {}

  void update(const Transition& tr, Rng&) override { dist_ql_update(eta_, tr, gamma_, repr_); }
  std::vector<double> action_values(int s) const override { return to_vector(eta_.means(s)); }
  bool is_distributional() const override { return true; }
  std::vector<double> action_variances(int s) const override {
    return to_vector(eta_.variances(s));
  }

 private:
  ReturnTable eta_;
  Representation repr_;
  double gamma_;
};

class DoubleDistLearner final : public Learner {
 public:
  DoubleDistLearner(const TabularModel& model, Representation repr, BetaSchedule schedule)
      : a_(model, initial_distribution(repr)),
        b_(model, initial_distribution(repr)),
        repr_(std::move(repr)),
        schedule_(std::move(schedule)),
        gamma_(model.gamma()) {}

  void update(const Transition& tr, Rng& rng) override {
    addq_update(a_, b_, tr, gamma_, schedule_, repr_, rng);
  }

  std::vector<double> action_values(int s) const override {
    const auto ma = a_.means(s);
    const auto mb = b_.means(s);
    std::vector<double> out(ma.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = 0.5 * (ma[i] + mb[i]);
    return out;
  }

  bool is_distributional() const override { return true; }

  std::vector<double> action_variances(int s) const override {
    const auto va = a_.variances(s);
    const auto vb = b_.variances(s);
    std::vector<double> out(va.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = 0.5 * (va[i] + vb[i]);
    return out;
  }

 private:
  ReturnTable a_;
  ReturnTable b_;
  Representation repr_;
  BetaSchedule schedule_;
  double gamma_;
};

}  // namespace

std::string_view to_string(Algorithm a) {
  for (const auto& [alg, name] : kNames)
    if (alg == a) return name;
  throw std::logic_error("unnamed algorithm");
}

Algorithm parse_algorithm(std::string_view name) {
  for (const auto& [alg, n] : kNames)
    if (n == name) return alg;
  throw std::invalid_argument("unknown algorithm '" + std::string(name) + "'");
}

bool is_distributional(Algorithm a) {
  return a == Algorithm::dist_ql || a == Algorithm::dist_dql || a == Algorithm::addq;
}

std::string AlgorithmSpec::label() const {
  std::ostringstream out;
  out << to_string(algorithm);
  switch (algorithm) {
    case Algorithm::addq: out << '[' << beta_schedule << ']'; break;
    case Algorithm::wdq: out << "[c=" << wdq_c << ']'; break;
    case Algorithm::maxmin:
    case Algorithm::ebql: out << "[K=" << ensemble_size << ']'; break;
    case Algorithm::redq: out << "[K=" << ensemble_size << ",M=" << subset_size << ']'; break;
    default: break;
  }
  return out.str();
}

void validate(const AlgorithmSpec& spec) {
  if (is_distributional(spec.algorithm) && !spec.representation)
    throw std::invalid_argument(std::string(to_string(spec.algorithm)) +
                                " requires a categorical or quantile representation");
  if (!is_distributional(spec.algorithm) && spec.representation)
    throw std::invalid_argument(std::string(to_string(spec.algorithm)) +
                                " is a scalar learner; use representation 'scalar'");
  if (spec.algorithm == Algorithm::addq) BetaSchedule::preset(spec.beta_schedule);
  if (spec.algorithm == Algorithm::wdq && !(spec.wdq_c > 0.0))
    throw std::invalid_argument("wdq requires c > 0");
  const bool ensemble = spec.algorithm == Algorithm::maxmin || spec.algorithm == Algorithm::ebql ||
                        spec.algorithm == Algorithm::redq;
  if (ensemble && spec.ensemble_size < 2)
    throw std::invalid_argument("ensemble methods require at least 2 tables");
  if (spec.algorithm == Algorithm::redq &&
      (spec.subset_size < 1 || spec.subset_size > spec.ensemble_size))
    throw std::invalid_argument("redq subset size must lie in [1, K]");
}

std::unique_ptr<Learner> make_learner(const AlgorithmSpec& spec, const TabularModel& model) {
  validate(spec);
  switch (spec.algorithm) {
    case Algorithm::ql: return std::make_unique<QLearner>(model);
    case Algorithm::dql:
    case Algorithm::clipped:
    case Algorithm::wdq: return std::make_unique<DoubleQLearner>(model, spec.algorithm, spec.wdq_c);
    case Algorithm::maxmin:
    case Algorithm::ebql:
    case Algorithm::redq:
      return std::make_unique<EnsembleLearner>(model, spec.algorithm, spec.ensemble_size,
                                               spec.subset_size);
    case Algorithm::dist_ql: return std::make_unique<DistQLearner>(model, *spec.representation);
    case Algorithm::dist_dql:
      return std::make_unique<DoubleDistLearner>(model, *spec.representation,
                                                 BetaSchedule::constant(0.0));
    case Algorithm::addq:
      return std::make_unique<DoubleDistLearner>(model, *spec.representation,
                                                 BetaSchedule::preset(spec.beta_schedule));
  }
  throw std::logic_error("make_learner: unhandled algorithm");
}

}  // namespace addq
