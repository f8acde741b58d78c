// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
// Usage: acceptance <path-to-addq-cli> [scratch-dir]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "addq/beta_schedule.hpp"
#include "addq/config.hpp"
#include "addq/distributional_updates.hpp"
#include "addq/experiment.hpp"
#include "addq/oracle.hpp"
#include "addq/theory.hpp"

using namespace addq;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int jobs() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

int failures = 0;

void verdict(const std::string& id, bool pass, const std::string& detail) {
  std::cout << id << ' ' << (pass ? "PASS" : "FAIL") << "  " << detail << std::endl;
  if (!pass) ++failures;
}

std::string fmt(double x, int digits = 4) {
  std::ostringstream s;
  s.precision(digits);
  s << x;
  return s.str();
}

const Support kNarrow(-3.0, 3.0, 51);
// Same 0.12 spacing, wide enough that every grid return stays on the support.
const Support kWide(-21.0, 21.0, 351);

ExperimentConfig grid_config(Algorithm alg, const Support& support, long steps) {
  ExperimentConfig c;
  c.environment = GridWorldSpec{};
  c.algorithm.algorithm = alg;
  c.algorithm.beta_schedule = "n3";
  c.algorithm.representation = support;
  c.total_steps = steps;
  c.eval_every = 500;
  c.eval_horizon = 6;
  for (std::uint64_t s = 0; s < 10; ++s) c.seeds.push_back(s);
  validate(c);
  return c;
}

ExperimentConfig bandit_config(Algorithm alg, int k1, double sigma1) {
  ExperimentConfig c;
  BanditSpec b;
  b.k1 = k1;
  b.sigma1 = sigma1;
  c.environment = b;
  c.algorithm.algorithm = alg;
  if (is_distributional(alg)) c.algorithm.representation = kNarrow;
  c.total_steps = 20000;
  c.eval_every = 20000;
  c.eval_horizon = 3;
  for (std::uint64_t s = 0; s < 10; ++s) c.seeds.push_back(s);
  validate(c);
  return c;
}

double correct_rate(const std::vector<RunRecord>& runs) {
  double sum = 0.0;
  for (const auto& r : runs) sum += r.rows.back().correct_action;
  return sum / static_cast<double>(runs.size());
}

// Mean over seeds of summed_abs_bias at each evaluation step.
std::vector<double> mean_summed_bias(const std::vector<RunRecord>& runs, long max_step) {
  std::vector<double> out;
  for (std::size_t i = 0; i < runs[0].rows.size() && runs[0].rows[i].step <= max_step; ++i) {
    double s = 0.0;
    for (const auto& r : runs) s += r.rows[i].summed_abs_bias;
    out.push_back(s / static_cast<double>(runs.size()));
  }
  return out;
}

// ADDQ strictly below both baselines at every evaluation step past `after`.
struct Ordering {
  int points = 0;
  int violations = 0;
  double addq = 0, ql = 0, dql = 0;  // final means
};

Ordering ordering(const std::vector<RunRecord>& addq, const std::vector<RunRecord>& ql,
                  const std::vector<RunRecord>& dql, long after, long until) {
  const auto a = mean_summed_bias(addq, until);
  const auto q = mean_summed_bias(ql, until);
  const auto d = mean_summed_bias(dql, until);
  Ordering o;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (addq[0].rows[i].step <= after) continue;
    ++o.points;
    if (!(a[i] < q[i] && a[i] < d[i])) ++o.violations;
  }
  o.addq = a.back();
  o.ql = q.back();
  o.dql = d.back();
  return o;
}

void criterion1() {
  const auto t0 = Clock::now();
  const auto c = verify_variance_law(5, 1.0, 30, 2000, 1);
  const double secs = seconds_since(t0);
  verdict("C1", c.passed() && secs < 10.0,
          "KS p=" + fmt(c.ks.p_value) + " mean=" + fmt(c.mean, 5) + "+-" + fmt(c.mean_tolerance, 3) +
              " var=" + fmt(c.variance, 4) + " (expected " + fmt(c.expected_variance, 4) +
              ", se " + fmt(c.variance_stderr, 3) + ") " + fmt(secs, 2) + "s");
}

void criterion2() {
  const auto t0 = Clock::now();
  const auto a = verify_bias_bound(0.9, 5.0, 5, 100, 2000, 2);
  const auto b = verify_bias_bound(0.9, 1.0, 20, 25, 2000, 3);
  const double secs = seconds_since(t0);
  const bool first = a.empirical_mean_bias - 2.0 * a.standard_error > 0.3868;
  verdict("C2", first && b.passed() && secs < 30.0,
          "(s=5,k=5,N=100) bias-2se=" + fmt(a.empirical_mean_bias - 2 * a.standard_error) +
              " > 0.3868; (s=1,k=20,N=25) bias-2se=" +
              fmt(b.empirical_mean_bias - 2 * b.standard_error) + " > " + fmt(b.lower_bound) +
              " " + fmt(secs, 2) + "s");
}

// C3 and C4 share the grid runs: the first 200k steps of a 500k run are a 200k run.
void criteria3and4() {
  const std::vector<std::pair<Algorithm, const char*>> algs = {
      {Algorithm::addq, "addq[n3]"}, {Algorithm::dist_ql, "dist_ql"}, {Algorithm::dist_dql, "dist_dql"}};
  std::vector<std::vector<RunRecord>> runs;
  bool all_pass = true;
  std::string detail;
  for (const auto& [alg, name] : algs) {
    const auto t0 = Clock::now();
    runs.push_back(run_experiment(grid_config(alg, kWide, 500000), jobs()));
    const double secs = seconds_since(t0);
    int ok = 0;
    double worst = 0.0;
    std::string per_seed;
    for (const auto& r : runs.back()) {
      const double sup = r.rows.back().max_abs_bias;
      worst = std::max(worst, sup);
      ok += sup < 0.1;
      per_seed += " " + fmt(sup, 3);
    }
    const bool pass = ok >= 8 && secs < 300.0;
    all_pass = all_pass && pass;
    std::cout << "  C3 " << name << ": " << ok << "/10 seeds with sup bias < 0.1; sup bias per seed"
              << per_seed << "; " << fmt(secs, 3) << "s\n";
    detail += std::string(name) + " " + std::to_string(ok) + "/10; ";
  }
  verdict("C3", all_pass, detail + "support [-21,21] x 351, 500k steps");

  const Ordering o = ordering(runs[0], runs[1], runs[2], 100000, 200000);
  verdict("C4", o.violations == 0,
          std::to_string(o.violations) + "/" + std::to_string(o.points) +
              " points past 100k violate the ordering; at 200k addq=" + fmt(o.addq) +
              " dist_ql=" + fmt(o.ql) + " dist_dql=" + fmt(o.dql) + " (support [-21,21] x 351)");

  std::vector<std::vector<RunRecord>> narrow;
  for (const auto& [alg, name] : algs)
    narrow.push_back(run_experiment(grid_config(alg, kNarrow, 200000), jobs()));
  const Ordering n = ordering(narrow[0], narrow[1], narrow[2], 100000, 200000);
  std::cout << "  C4 info, support [-3,3] x 51: " << n.violations << "/" << n.points
            << " points violate; at 200k addq=" << fmt(n.addq) << " dist_ql=" << fmt(n.ql)
            << " dist_dql=" << fmt(n.dql) << '\n';
}

void criterion5() {
  const auto ql = run_experiment(bandit_config(Algorithm::ql, 10, 8.0), jobs());
  const auto ad = run_experiment(bandit_config(Algorithm::addq, 10, 8.0), jobs());
  const double r_ql = correct_rate(ql), r_ad = correct_rate(ad);
  const bool gap = r_ad - r_ql >= 0.1;

  std::vector<double> rates;
  std::string sweep;
  for (int k1 : {5, 10, 15, 20}) {
    rates.push_back(correct_rate(run_experiment(bandit_config(Algorithm::ql, k1, 5.0), jobs())));
    sweep += " k1=" + std::to_string(k1) + ":" + fmt(rates.back(), 2);
  }
  int inversions = 0;
  for (std::size_t i = 1; i < rates.size(); ++i) inversions += rates[i] > rates[i - 1];
  const bool monotone = inversions <= 1 && rates.back() < rates.front();
  verdict("C5", gap && monotone,
          "sigma1=8: ql=" + fmt(r_ql, 2) + " addq=" + fmt(r_ad, 2) + "; ql sweep" + sweep +
              " (" + std::to_string(inversions) + " inversions)");
}

void scale_to_one(std::vector<double>& w) {
  double total = 0.0;
  for (double x : w) total += x;
  for (double& x : w) x /= total;
}

void scale_to_one(AtomList& atoms) {
  double total = 0.0;
  for (const auto& a : atoms) total += a.weight;
  for (auto& a : atoms) a.weight /= total;
}

bool projection_properties() {
  Rng rng(101);
  std::uniform_real_distribution<double> loc(-2.9, 2.9), w(0.01, 1.0), lam(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    AtomList p, q;
    for (int i = 0; i < 7; ++i) p.push_back({loc(rng), w(rng)});
    for (int i = 0; i < 5; ++i) q.push_back({loc(rng), w(rng)});
    scale_to_one(p);
    scale_to_one(q);
    const double l = lam(rng);
    AtomList mixed;
    for (auto a : p) mixed.push_back({a.location, l * a.weight});
    for (auto a : q) mixed.push_back({a.location, (1 - l) * a.weight});
    const auto dm = project_categorical(mixed, kNarrow);
    const auto dp = project_categorical(p, kNarrow);
    const auto dq = project_categorical(q, kNarrow);
    const auto pm = dm.weights(), pp = dp.weights(), pq = dq.weights();
    for (std::size_t i = 0; i < pm.size(); ++i)
      if (std::abs(pm[i] - (l * pp[i] + (1 - l) * pq[i])) > 1e-12) return false;
    if (std::abs(mean(FiniteDistribution{project_categorical(p, kNarrow)}) - mean(p)) > 1e-10)
      return false;
  }
  return true;
}

bool contraction_witness() {
  Rng rng(202);
  std::uniform_real_distribution<double> w(0.0, 1.0), r(-1.0, 1.0);
  const double gamma = 0.9;
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> a(51), b(51);
    for (auto& x : a) x = w(rng);
    for (auto& x : b) x = w(rng);
    scale_to_one(a);
    scale_to_one(b);
    const FiniteDistribution da = CategoricalDist(kNarrow, a), db = CategoricalDist(kNarrow, b);
    const double reward = r(rng);
    const FiniteDistribution ta = project_categorical(pushforward(da, reward, gamma), kNarrow);
    const FiniteDistribution tb = project_categorical(pushforward(db, reward, gamma), kNarrow);
    if (cramer_distance(ta, tb) > std::sqrt(gamma) * cramer_distance(da, db) + 1e-12) return false;
  }
  return true;
}

double mean_tracking_gap() {
  const auto m = gridworld_model({});
  QTable q(m);
  ReturnTable eta(m, initial_distribution(kWide));
  Rng rng(303);
  const EpsGreedyLinear eps;
  int state = m.start_state();
  double worst = 0.0;
  for (long t = 0; t < 20000; ++t) {
    const Transition tr = sample_transition(m, state, act(eps, q.row(state), t, rng), rng);
    ql_update(q, tr, m.gamma());
    dist_ql_update(eta, tr, m.gamma(), kWide);
    worst = std::max(worst, std::abs(q.value(tr.state, tr.action) - eta.mean(tr.state, tr.action)));
    state = tr.terminal ? m.start_state() : tr.next_state;
  }
  return worst;
}

std::vector<double> weights_of(const FiniteDistribution& d) {
  const auto w = std::get<CategoricalDist>(d).weights();
  return {w.begin(), w.end()};
}

bool beta_endpoints() {
  const auto m = gridworld_model({});
  for (double beta : {0.0, 1.0}) {
    ReturnTable a(m, initial_distribution(kNarrow)), b(m, initial_distribution(kNarrow));
    ReturnTable ra(m, initial_distribution(kNarrow)), rb(m, initial_distribution(kNarrow));
    Rng rng(404), rng2(404);
    int state = m.start_state();
    std::uniform_int_distribution<int> pick(0, 3);
    for (int t = 0; t < 5000; ++t) {
      const int action = pick(rng);
      pick(rng2);
      const Transition tr = sample_transition(m, state, action, rng);
      sample_transition(m, state, action, rng2);
      const auto x = addq_update(a, b, tr, m.gamma(), BetaSchedule::constant(beta), kNarrow, rng);
      const auto y = beta == 0.0
                         ? dist_dql_update(ra, rb, tr, m.gamma(), kNarrow, rng2)
                         : dist_ql_update(draw_side(rng2) == Side::A ? ra : rb, tr, m.gamma(), kNarrow);
      if (weights_of(x.target) != weights_of(y.target)) return false;
      state = tr.terminal ? m.start_state() : tr.next_state;
    }
  }
  return true;
}

bool deterministic_runs() {
  ExperimentConfig c = grid_config(Algorithm::addq, kNarrow, 5000);
  c.seeds = {7, 8};
  const auto m = make_model(c.environment);
  auto text = [&](const std::vector<RunRecord>& runs) {
    std::ostringstream out;
    for (const auto& r : runs) write_csv(out, to_table(r, m, true));
    return out.str();
  };
  return text(run_experiment(c, 1)) == text(run_experiment(c, 2));
}

void criterion6() {
  const auto t0 = Clock::now();
  const bool proj = projection_properties();
  const bool contraction = contraction_witness();
  const double tracking = mean_tracking_gap();
  const bool endpoints = beta_endpoints();
  const bool det = deterministic_runs();
  const double secs = seconds_since(t0);
  verdict("C6", proj && contraction && tracking <= 1e-8 && endpoints && det && secs < 120.0,
          std::string("projection ") + (proj ? "ok" : "bad") + ", contraction " +
              (contraction ? "ok" : "bad") + ", mean tracking " + fmt(tracking, 3) +
              ", beta endpoints " + (endpoints ? "ok" : "bad") + ", determinism " +
              (det ? "ok" : "bad") + " " + fmt(secs, 3) + "s");
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

void criterion7(const std::string& cli, const fs::path& scratch) {
  const fs::path cfg = scratch / "compare.json";
  std::ofstream(cfg) << R"({"environment": {"type": "gridworld"}, "algorithm": {"name": "ql"},
    "total_steps": 20000, "seeds": [0, 1]})";
  bool ok = true;
  for (const char* run : {"a", "b"}) {
    const std::string cmd = "\"" + cli + "\" compare \"" + cfg.string() + "\" --output \"" +
                            (scratch / run).string() + "\" > \"" +
                            (scratch / (std::string(run) + ".log")).string() + "\" 2>&1";
    ok = ok && std::system(cmd.c_str()) == 0;
  }
  int files = 0, differing = 0;
  if (ok) {
    for (const auto& e : fs::recursive_directory_iterator(scratch / "a")) {
      if (!e.is_regular_file()) continue;
      ++files;
      const fs::path other = scratch / "b" / fs::relative(e.path(), scratch / "a");
      if (slurp(e.path()) != slurp(other)) ++differing;
    }
  }
  int rows = -1;
  if (ok) {
    std::ifstream summary(scratch / "a" / "summary.csv");
    std::string line;
    rows = 0;
    while (std::getline(summary, line)) ++rows;
    --rows;
  }
  verdict("C7", ok && rows == 13 && differing == 0 && files > 0,
          std::to_string(rows) + " configurations in summary.csv; " + std::to_string(files) +
              " files, " + std::to_string(differing) + " differ between repeated runs");
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: acceptance <addq-cli> [scratch-dir]\n";
    return 2;
  }
  const std::string cli = argv[1];
  const fs::path scratch =
      argc > 2 ? fs::path(argv[2]) : fs::temp_directory_path() / "addq_acceptance";
  fs::remove_all(scratch);
  fs::create_directories(scratch);

  criterion1();
  criterion2();
  criteria3and4();
  criterion5();
  criterion6();
  criterion7(cli, scratch);

  std::cout << (failures == 0 ? "ALL CRITERIA PASSED" : std::to_string(failures) + " CRITERIA FAILED")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
