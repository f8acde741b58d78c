#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

#include "addq/oracle.hpp"

using namespace addq;

namespace {

const Support kNarrow(-3.0, 3.0, 51);
const Support kWide(-21.0, 21.0, 351);

std::vector<double> weights(const FiniteDistribution& d) {
  const auto w = std::get<CategoricalDist>(d).weights();
  return {w.begin(), w.end()};
}

}  // namespace

TEST_CASE("bandit Q*") {
  const auto m = bandit_model({});
  const auto vi = value_iteration(m);
  CHECK(vi.q.value(0, bandit::kLeft) == doctest::Approx(-0.09).epsilon(1e-12));
  CHECK(vi.q.value(0, bandit::kRight) == doctest::Approx(0.09).epsilon(1e-12));
  CHECK(vi.q.value(0, bandit::kDown) == 0.0);
  for (int a = 0; a < 10; ++a) CHECK(vi.q.value(1, a) == doctest::Approx(-0.1));
  for (int a = 0; a < 5; ++a) CHECK(vi.q.value(2, a) == doctest::Approx(0.1));
  CHECK(greedy_policy(vi.q)(0) == bandit::kRight);
  CHECK(min_action_gap(vi.q) == 0.0);
  CHECK(greedy_sets(vi.q)[0] == std::vector<int>{bandit::kRight});
}

TEST_CASE("all-zero rewards give Q* = 0") {
  TabularModel::BranchTable t(2);
  t[0] = {{{1.0, PointReward{0.0}, 0, false}}, {{1.0, PointReward{0.0}, 1, true}}};
  const TabularModel m(std::move(t), {false, true}, 0.9, 0, 10);
  const auto vi = value_iteration(m);
  for (double v : vi.q.values()) CHECK(v == 0.0);
  CHECK(bellman_residual(m, vi.q) == 0.0);
}

TEST_CASE("grid Q* against the independent golden table") {
  const auto m = gridworld_model({});
  const auto vi = value_iteration(m, 1e-12);
  std::ifstream f(std::string(ADDQ_TEST_DATA) + "/grid_q_star.tsv");
  REQUIRE(f.good());
  std::string header;
  std::getline(f, header);
  CHECK(header == "state\taction\tvalue");
  int s = 0, a = 0, rows = 0;
  double v = 0.0;
  while (f >> s >> a >> v) {
    CHECK(vi.q.value(s, a) == doctest::Approx(v).epsilon(1e-10));
    ++rows;
  }
  CHECK(rows == m.num_pairs());
  CHECK(vi.q.value(9, grid::kDown) == 1.0);
  CHECK(bellman_residual(m, vi.q) < 1e-10);
}

TEST_CASE("value iteration residuals contract") {
  const auto m = gridworld_model({});
  const auto vi = value_iteration(m, 1e-12);
  REQUIRE(vi.residuals.size() >= 2);
  for (std::size_t i = 1; i < vi.residuals.size(); ++i)
    CHECK(vi.residuals[i] <= m.gamma() * vi.residuals[i - 1] + 1e-15);
}

TEST_CASE("grid optimal actions tie at several states") {
  const auto q = value_iteration(gridworld_model({})).q;
  const auto sets = greedy_sets(q);
  for (int s : {2, 3, 4, 8}) CHECK(sets[s].size() >= 2);
  CHECK(min_action_gap(q) < 1e-9);
  CHECK(sets[grid::kGoal].empty());
  // Ties resolve to the lowest index.
  CHECK(greedy_policy(q)(3) == sets[3].front());
  CHECK(greedy_policy(q)(grid::kGoal) == -1);
}

TEST_CASE("policy evaluation of the greedy policy recovers Q*") {
  const auto m = gridworld_model({});
  const auto q_star = value_iteration(m, 1e-12).q;
  const auto q_pi = policy_evaluation(m, greedy_policy(q_star));
  for (int i = 0; i < m.num_pairs(); ++i)
    CHECK(q_pi.values()[i] == doctest::Approx(q_star.values()[i]).epsilon(1e-10));

  // Always-up never terminates from the top row: value is a geometric series of 0.
  const auto up = policy_evaluation(m, [](int) { return grid::kUp; });
  CHECK(std::abs(up.value(3, grid::kUp)) < 1e-12);
  CHECK(up.value(9, grid::kDown) == doctest::Approx(1.0));
}

TEST_CASE("categorical fixed point") {
  const auto m = gridworld_model({});
  const auto q_star = value_iteration(m).q;
  const auto pi = greedy_policy(q_star);

  SUBCASE("terminal transition into the goal") {
    const auto fp = categorical_fixed_point(m, pi, kNarrow);
    const auto w = weights(fp.eta.at(9, grid::kDown));
    CHECK(w[33] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(w[34] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(fp.distances.back() < 1e-10);
    for (int s = 0; s < m.num_states(); ++s)
      for (int a = 0; a < m.num_actions(s); ++a) {
        double total = 0.0;
        for (double x : weights(fp.eta.at(s, a))) total += x;
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
      }
  }
  SUBCASE("sweeps contract at rate sqrt(gamma)") {
    const auto fp = categorical_fixed_point(m, pi, kNarrow);
    for (std::size_t i = 1; i < fp.distances.size(); ++i)
      if (fp.distances[i - 1] > 1e-12)
        CHECK(fp.distances[i] <= std::sqrt(m.gamma()) * fp.distances[i - 1] + 1e-14);
  }
  SUBCASE("means match policy evaluation when returns stay on the support") {
    const auto fp = categorical_fixed_point(m, pi, kWide);
    const auto q_pi = policy_evaluation(m, pi);
    for (int s = 0; s < m.num_states(); ++s)
      for (int a = 0; a < m.num_actions(s); ++a)
        CHECK(fp.eta.mean(s, a) == doctest::Approx(q_pi.value(s, a)).epsilon(1e-8));
  }
  SUBCASE("a narrow support clips the gray-cell returns") {
    const auto fp = categorical_fixed_point(m, pi, kNarrow);
    const auto q_pi = policy_evaluation(m, pi);
    CHECK(std::abs(fp.eta.mean(11, grid::kDown) - q_pi.value(11, grid::kDown)) > 0.1);
  }
  CHECK_THROWS_AS(categorical_fixed_point(bandit_model({}), [](int) { return 0; }, kNarrow),
                  std::invalid_argument);
}

TEST_CASE("bias report") {
  const auto m = bandit_model({});
  const auto q_star = value_iteration(m).q;
  std::vector<double> est(q_star.values().begin(), q_star.values().end());
  auto exact = bias_report(m, est, q_star);
  CHECK(exact.summed_abs_bias == doctest::Approx(0.0));
  for (bool ok : exact.greedy_agrees) CHECK(ok);

  est[m.pair(0, bandit::kLeft)] += 0.5;
  est[m.pair(1, 3)] -= 0.25;
  const auto r = bias_report(m, est, q_star);
  CHECK(r.bias[m.pair(0, bandit::kLeft)] == doctest::Approx(0.5));
  CHECK(r.summed_abs_bias == doctest::Approx(0.75));
  CHECK(r.max_abs_bias == doctest::Approx(0.5));
  CHECK_FALSE(r.greedy_agrees[0]);
  CHECK(r.greedy_agrees[bandit::kTerminal]);

  est.pop_back();
  CHECK_THROWS_AS(bias_report(m, est, q_star), std::invalid_argument);
}

TEST_CASE("TSV writers") {
  const auto m = bandit_model({});
  const auto q = value_iteration(m).q;
  std::ostringstream out;
  write_q_tsv(out, m, q);
  const std::string text = out.str();
  CHECK(text.rfind("state\taction\tvalue\n", 0) == 0);
  CHECK(text.find("\n0\t1\t0.09") != std::string::npos);

  const auto g = gridworld_model({});
  const auto fp = categorical_fixed_point(g, greedy_policy(value_iteration(g).q), kNarrow);
  std::ostringstream eta;
  write_return_tsv(eta, g, fp.eta);
  CHECK(eta.str().rfind("state\taction\tlocation\tweight\n", 0) == 0);
}
