#include "addq/distributional_updates.hpp"

#include <stdexcept>

namespace addq {

FiniteDistribution initial_distribution(const Representation& repr, double location) {
  if (const auto* support = std::get_if<Support>(&repr))
    return CategoricalDist::point_mass(*support, location);
  return QuantileDist::point_mass(location, std::get<QuantileRepresentation>(repr).atoms);
}

FiniteDistribution project(const AtomList& atoms, const Representation& repr) {
  if (const auto* support = std::get_if<Support>(&repr)) return project_categorical(atoms, *support);
  return project_quantile(atoms, std::get<QuantileRepresentation>(repr).atoms);
}

FiniteDistribution blend(const FiniteDistribution& current, const FiniteDistribution& target,
                         double alpha) {
  if (const auto* c = std::get_if<CategoricalDist>(&current))
    return mix(std::get<CategoricalDist>(target), *c, alpha);
  const int m = std::get<QuantileDist>(current).size();
  return project_quantile(mixture(target, current, alpha), m);
}

std::vector<double> relative_variance(const ReturnTable& a, const ReturnTable& b, int s) {
  const auto va = a.variances(s);
  const auto vb = b.variances(s);
  std::vector<double> out(va.size());
  double state_mean = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = 0.5 * (va[i] + vb[i]);
    state_mean += out[i];
  }
  state_mean /= static_cast<double>(out.size());
  for (double& v : out) v = state_mean > 0.0 ? v / state_mean : 1.0;
  return out;
}

double adaptive_beta(const ReturnTable& a, const ReturnTable& b, int next, int greedy_action,
                     const BetaSchedule& schedule) {
  if (schedule.is_constant()) return schedule.final_beta();
  return schedule(relative_variance(a, b, next).at(greedy_action));
}

namespace {

void move_toward(ReturnTable& eta, int s, int a, const FiniteDistribution& target) {
  const double alpha = stepsize(eta.record_visit(s, a));
  eta.set(s, a, blend(eta.at(s, a), target, alpha));
}

}  // namespace

DistUpdateInfo addq_step(ReturnTable& updated, const ReturnTable& other, const Transition& tr,
                         double gamma, const BetaSchedule& schedule, const Representation& repr) {
  if (!(updated.layout() == other.layout()))
    throw std::invalid_argument("addq_step: tables have different layouts");
  if (updated.at(tr.state, tr.action).index() != other.at(tr.state, tr.action).index())
    throw std::invalid_argument("addq_step: tables use different representations");

  DistUpdateInfo info{Side::A, -1, 1.0, initial_distribution(repr)};
  if (tr.terminal) {
    info.target = project(AtomList{{tr.reward, 1.0}}, repr);
  } else {
    const int next = tr.next_state;
    info.greedy_action = select_greedy(updated.means(next));
    info.beta = adaptive_beta(updated, other, next, info.greedy_action, schedule);
    const AtomList nu = mixture(updated.at(next, info.greedy_action),
                                other.at(next, info.greedy_action), info.beta);
    info.target = project(pushforward(nu, tr.reward, gamma), repr);
  }
  move_toward(updated, tr.state, tr.action, info.target);
  return info;
}

DistUpdateInfo addq_update(ReturnTable& a, ReturnTable& b, const Transition& tr, double gamma,
                           const BetaSchedule& schedule, const Representation& repr, Rng& rng) {
  const Side side = draw_side(rng);
  DistUpdateInfo info = side == Side::A ? addq_step(a, b, tr, gamma, schedule, repr)
                                        : addq_step(b, a, tr, gamma, schedule, repr);
  info.side = side;
  return info;
}

DistUpdateInfo dist_ql_update(ReturnTable& eta, const Transition& tr, double gamma,
                              const Representation& repr) {
  DistUpdateInfo info{Side::A, -1, 1.0, initial_distribution(repr)};
  if (tr.terminal) {
    info.target = project(AtomList{{tr.reward, 1.0}}, repr);
  } else {
    info.greedy_action = select_greedy(eta.means(tr.next_state));
    info.target = project(pushforward(eta.at(tr.next_state, info.greedy_action), tr.reward, gamma), repr);
  }
  move_toward(eta, tr.state, tr.action, info.target);
  return info;
}

DistUpdateInfo dist_dql_update(ReturnTable& a, ReturnTable& b, const Transition& tr, double gamma,
                               const Representation& repr, Rng& rng) {
  return addq_update(a, b, tr, gamma, BetaSchedule::constant(0.0), repr, rng);
}

}  // namespace addq
