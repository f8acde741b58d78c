#include "addq/oracle.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "addq/updates.hpp"

namespace addq {

namespace {

constexpr int kMaxSweeps = 1'000'000;

double expected_reward(const TabularModel& model, int s, int a) {
  double r = 0.0;
  for (const Branch& b : model.branches(s, a)) r += b.probability * reward_mean(b.reward);
  return r;
}

double row_max(const QTable& q, int s) {
  const auto row = q.row(s);
  return row.empty() ? 0.0 : *std::max_element(row.begin(), row.end());
}

double optimality_backup(const TabularModel& model, const QTable& q, int s, int a) {
  double v = 0.0;
  for (const Branch& b : model.branches(s, a)) {
    const double next = b.terminal ? 0.0 : row_max(q, b.next_state);
    v += b.probability * (reward_mean(b.reward) + model.gamma() * next);
  }
  return v;
}

}  // namespace

ValueIterationResult value_iteration(const TabularModel& model, double tol) {
  if (!(model.gamma() < 1.0)) throw std::invalid_argument("value_iteration: need gamma < 1");
  const double threshold = model.gamma() > 0.0 ? tol * (1.0 - model.gamma()) / model.gamma() : tol;
  ValueIterationResult res{QTable(model), {}};
  QTable next(model);
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double change = 0.0;
    for (int s = 0; s < model.num_states(); ++s)
      for (int a = 0; a < model.num_actions(s); ++a) {
        const double v = optimality_backup(model, res.q, s, a);
        change = std::max(change, std::abs(v - res.q.value(s, a)));
        next.set(s, a, v);
      }
    std::swap(res.q, next);
    res.residuals.push_back(change);
    if (change < threshold) return res;
  }
  throw std::runtime_error("value_iteration: no convergence after 1e6 sweeps");
}

double bellman_residual(const TabularModel& model, const QTable& q) {
  double worst = 0.0;
  for (int s = 0; s < model.num_states(); ++s)
    for (int a = 0; a < model.num_actions(s); ++a)
      worst = std::max(worst, std::abs(optimality_backup(model, q, s, a) - q.value(s, a)));
  return worst;
}

QTable policy_evaluation(const TabularModel& model, const Policy& policy) {
  const int n = model.num_pairs();
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd r(n);
  for (int s = 0; s < model.num_states(); ++s)
    for (int a = 0; a < model.num_actions(s); ++a) {
      const int row = model.pair(s, a);
      r(row) = expected_reward(model, s, a);
      for (const Branch& b : model.branches(s, a)) {
        if (b.terminal || model.is_terminal(b.next_state)) continue;
        const int next_action = policy(b.next_state);
        m(row, model.pair(b.next_state, next_action)) -= model.gamma() * b.probability;
      }
    }
  const Eigen::VectorXd sol = m.partialPivLu().solve(r);
  QTable q(model);
  for (int s = 0; s < model.num_states(); ++s)
    for (int a = 0; a < model.num_actions(s); ++a) q.set(s, a, sol(model.pair(s, a)));
  return q;
}

Policy greedy_policy(const QTable& q) {
  return [q](int s) { return q.num_actions(s) == 0 ? -1 : select_greedy(q.row(s)); };
}

std::vector<std::vector<int>> greedy_sets(const QTable& q, double tie_tol) {
  std::vector<std::vector<int>> out(q.layout().num_states());
  for (int s = 0; s < q.layout().num_states(); ++s) {
    const auto row = q.row(s);
    if (row.empty()) continue;
    const double best = *std::max_element(row.begin(), row.end());
    for (int a = 0; a < static_cast<int>(row.size()); ++a)
      if (row[a] >= best - tie_tol) out[s].push_back(a);
  }
  return out;
}

double min_action_gap(const QTable& q) {
  double gap = std::numeric_limits<double>::infinity();
  for (int s = 0; s < q.layout().num_states(); ++s) {
    std::vector<double> row(q.row(s).begin(), q.row(s).end());
    if (row.size() < 2) continue;
    std::partial_sort(row.begin(), row.begin() + 2, row.end(), std::greater<>());
    gap = std::min(gap, row[0] - row[1]);
  }
  return gap;
}

FixedPointResult categorical_fixed_point(const TabularModel& model, const Policy& policy,
                                         const Support& support, double tol, int max_sweeps) {
  if (!model.has_finite_rewards())
    throw std::invalid_argument("categorical_fixed_point: Gaussian rewards are not supported");
  const FiniteDistribution delta0 = CategoricalDist::point_mass(support, 0.0);
  FixedPointResult res{ReturnTable(model, delta0), {}};
  ReturnTable next(model, delta0);
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double change = 0.0;
    for (int s = 0; s < model.num_states(); ++s)
      for (int a = 0; a < model.num_actions(s); ++a) {
        AtomList atoms;
        for (const Branch& b : model.branches(s, a)) {
          const bool terminal = b.terminal || model.is_terminal(b.next_state);
          const AtomList future =
              terminal ? AtomList{{0.0, 1.0}}
                       : to_atoms(res.eta.at(b.next_state, policy(b.next_state)));
          for (const Atom& r : reward_atoms(b.reward))
            for (const Atom& z : future)
              atoms.push_back({r.location + model.gamma() * z.location,
                               b.probability * r.weight * z.weight});
        }
        FiniteDistribution target = project_categorical(atoms, support);
        change = std::max(change, cramer_distance(target, res.eta.at(s, a)));
        next.set(s, a, std::move(target));
      }
    std::swap(res.eta, next);
    res.distances.push_back(change);
    if (change < tol) return res;
  }
  throw std::runtime_error("categorical_fixed_point: no convergence");
}

BiasReport bias_report(const TabularModel& model, std::span<const double> q_est,
                       const QTable& q_star) {
  if (static_cast<int>(q_est.size()) != model.num_pairs() ||
      !(q_star.layout() == TableLayout(model)))
    throw std::invalid_argument("bias_report: shape mismatch");
  BiasReport rep;
  rep.bias.resize(q_est.size());
  const auto star = q_star.values();
  for (std::size_t i = 0; i < q_est.size(); ++i) {
    rep.bias[i] = q_est[i] - star[i];
    rep.summed_abs_bias += std::abs(rep.bias[i]);
    rep.max_abs_bias = std::max(rep.max_abs_bias, std::abs(rep.bias[i]));
  }
  const auto sets = greedy_sets(q_star);
  rep.greedy_agrees.assign(model.num_states(), true);
  for (int s = 0; s < model.num_states(); ++s) {
    if (model.num_actions(s) == 0) continue;
    const int greedy =
        select_greedy(q_est.subspan(model.first_pair(s), model.num_actions(s)));
    rep.greedy_agrees[s] = std::find(sets[s].begin(), sets[s].end(), greedy) != sets[s].end();
  }
  return rep;
}

void write_q_tsv(std::ostream& out, const TabularModel& model, const QTable& q) {
  const auto old = out.precision(17);
  out << "state\taction\tvalue\n";
  for (int s = 0; s < model.num_states(); ++s)
    for (int a = 0; a < model.num_actions(s); ++a)
      out << s << '\t' << a << '\t' << q.value(s, a) << '\n';
  out.precision(old);
}

void write_return_tsv(std::ostream& out, const TabularModel& model, const ReturnTable& eta) {
  const auto old = out.precision(17);
  out << "state\taction\tlocation\tweight\n";
  for (int s = 0; s < model.num_states(); ++s)
    for (int a = 0; a < model.num_actions(s); ++a)
      for (const Atom& atom : to_atoms(eta.at(s, a)))
        out << s << '\t' << a << '\t' << atom.location << '\t' << atom.weight << '\n';
  out.precision(old);
}

}  // namespace addq
