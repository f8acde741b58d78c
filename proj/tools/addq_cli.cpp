// Command-line front end: run, verify-theory, oracle, ablate, compare, report.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "addq/beta_schedule.hpp"
#include "addq/config.hpp"
#include "addq/experiment.hpp"
#include "addq/oracle.hpp"
#include "addq/theory.hpp"

namespace fs = std::filesystem;
using namespace addq;

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kCheckFailed = 2;
constexpr int kRuntimeError = 3;

struct Options {
  std::string config;
  std::string output;
  int jobs = 1;
  std::uint64_t seed_offset = 0;
};

ExperimentConfig load_for_run(const Options& opt) {
  ExperimentConfig c = load_experiment_config(opt.config);
  for (auto& s : c.seeds) s += opt.seed_offset;
  if (!opt.output.empty()) c.output_dir = opt.output;
  if (c.output_dir.empty()) throw ConfigError("no output directory (set output_dir or --output)");
  return c;
}

void run_and_write(const ExperimentConfig& c, int jobs) {
  const auto records = run_experiment(c, jobs);
  write_run_directory(c.output_dir, c, records);
}

int cmd_run(const Options& opt) {
  const ExperimentConfig c = load_for_run(opt);
  run_and_write(c, opt.jobs);
  std::cout << "wrote " << c.seeds.size() << " run(s) to " << c.output_dir << '\n';
  return kOk;
}

int cmd_report(const std::string& dir) {
  const Summary s = report_run_directory(dir);
  const int k = static_cast<int>(std::find(s.columns.begin(), s.columns.end(), "summed_abs_bias") -
                                 s.columns.begin());
  std::cout << "aggregated " << s.seeds << " seed(s), " << s.steps.size() << " evaluation points\n";
  if (!s.steps.empty() && k < static_cast<int>(s.columns.size()))
    std::cout << "final summed_abs_bias " << s.mean.back()[k] << " +- " << s.stderr_.back()[k]
              << '\n';
  return kOk;
}

int cmd_verify_theory(const Options& opt) {
  const TheoryConfig tc = opt.config.empty() ? parse_theory_config("{}")
                                             : load_theory_config(opt.config);
  std::ostringstream report;
  bool ok = true;
  std::vector<VarianceLawCheck> laws;
  std::vector<BoundCheck> bounds;
  for (const auto& p : tc.variance_law) {
    laws.push_back(verify_variance_law(p.k, p.sigma, p.N, p.replicates, p.seed + opt.seed_offset));
    write_report(report, laws.back());
    ok = ok && laws.back().passed();
  }
  for (const auto& p : tc.bias_bound) {
    bounds.push_back(
        verify_bias_bound(p.gamma, p.sigma, p.k, p.N, p.replicates, p.seed + opt.seed_offset));
    write_report(report, bounds.back());
    ok = ok && bounds.back().passed();
  }
  report << (ok ? "ALL CHECKS PASSED\n" : "SOME CHECKS FAILED\n");
  std::cout << report.str();

  if (!opt.output.empty()) {
    fs::create_directories(opt.output);
    std::ofstream(fs::path(opt.output) / "theory_report.txt") << report.str();
    std::ofstream raw(fs::path(opt.output) / "theory_replicates.csv");
    raw.precision(17);
    raw << "check,index,replicate,value\n";
    for (std::size_t i = 0; i < laws.size(); ++i)
      for (std::size_t r = 0; r < laws[i].s2.size(); ++r)
        raw << "s2," << i << ',' << r << ',' << laws[i].s2[r] << '\n';
    for (std::size_t i = 0; i < bounds.size(); ++i)
      for (std::size_t r = 0; r < bounds[i].q_hat.size(); ++r)
        raw << "q_hat," << i << ',' << r << ',' << bounds[i].q_hat[r] << '\n';
  }
  return ok ? kOk : kCheckFailed;
}

int cmd_oracle(const Options& opt) {
  const OracleConfig oc = load_oracle_config(opt.config);
  const fs::path out = opt.output.empty() ? fs::path("oracle") : fs::path(opt.output);
  fs::create_directories(out);
  const TabularModel model = make_model(oc.environment);
  const auto vi = value_iteration(model, oc.tol);
  {
    std::ofstream f(out / "q_star.tsv");
    write_q_tsv(f, model, vi.q);
  }
  {
    std::ofstream f(out / "model.tsv");
    write_model_table(f, model);
  }
  write_q_tsv(std::cout, model, vi.q);
  std::cerr << "value iteration: " << vi.residuals.size() << " sweeps, min action gap "
            << min_action_gap(vi.q) << '\n';
  if (model.has_finite_rewards()) {
    const auto fp = categorical_fixed_point(model, greedy_policy(vi.q), oc.support, oc.tol);
    std::ofstream f(out / "eta_c.tsv");
    write_return_tsv(f, model, fp.eta);
    std::cerr << "categorical fixed point: " << fp.distances.size() << " sweeps\n";
  } else {
    std::cerr << "Gaussian rewards: no categorical fixed point written\n";
  }
  return kOk;
}

std::string dir_name(const AlgorithmSpec& spec) {
  std::string s = spec.label();
  for (char& ch : s)
    if (ch == '[' || ch == ']' || ch == ',' || ch == '=') ch = '_';
  while (!s.empty() && s.back() == '_') s.pop_back();
  return s;
}

int sweep(const Options& opt, const std::vector<AlgorithmSpec>& specs) {
  const ExperimentConfig base = load_for_run(opt);
  const fs::path root = base.output_dir;
  fs::create_directories(root);
  std::ofstream summary(root / "summary.csv");
  summary.precision(9);
  summary << "algorithm,final_step,summed_abs_bias_mean,summed_abs_bias_stderr,"
             "summed_abs_bias_avg_over_run,eval_return_mean,correct_action_mean\n";
  for (const AlgorithmSpec& spec : specs) {
    ExperimentConfig c = base;
    c.algorithm = spec;
    c.output_dir = (root / dir_name(spec)).string();
    validate(c);
    run_and_write(c, opt.jobs);
    const Summary s = report_run_directory(c.output_dir);
    auto col = [&](const char* name) {
      return static_cast<std::size_t>(std::find(s.columns.begin(), s.columns.end(), name) -
                                      s.columns.begin());
    };
    const std::size_t bias = col("summed_abs_bias");
    double avg = 0.0;
    for (const auto& row : s.mean) avg += row[bias];
    avg /= static_cast<double>(s.mean.size());
    summary << spec.label() << ',' << s.steps.back() << ',' << s.mean.back()[bias] << ','
            << s.stderr_.back()[bias] << ',' << avg << ',' << s.mean.back()[col("eval_return")]
            << ',' << s.mean.back()[col("correct_action")] << '\n';
    std::cout << spec.label() << ": final summed_abs_bias " << s.mean.back()[bias] << '\n';
  }
  return kOk;
}

int cmd_ablate(const Options& opt) {
  const ExperimentConfig base = load_experiment_config(opt.config);
  if (!base.algorithm.representation)
    throw ConfigError("ablate needs a categorical or quantile representation");
  std::vector<AlgorithmSpec> specs;
  for (const auto& name : BetaSchedule::preset_names()) {
    AlgorithmSpec s;
    s.algorithm = Algorithm::addq;
    s.beta_schedule = name;
    s.representation = base.algorithm.representation;
    specs.push_back(s);
  }
  AlgorithmSpec wdq;
  wdq.algorithm = Algorithm::wdq;
  wdq.wdq_c = 10.0;
  specs.push_back(wdq);
  return sweep(opt, specs);
}

int cmd_compare(const Options& opt) {
  std::vector<AlgorithmSpec> specs;
  auto add = [&](Algorithm a, int k, int m) {
    AlgorithmSpec s;
    s.algorithm = a;
    s.ensemble_size = k;
    s.subset_size = m;
    specs.push_back(s);
  };
  for (int k : {2, 4, 6, 8}) add(Algorithm::maxmin, k, 1);
  for (int k : {3, 7, 10, 15}) add(Algorithm::ebql, k, 1);
  for (auto [k, m] : {std::pair{3, 1}, {3, 2}, {5, 1}, {5, 2}}) add(Algorithm::redq, k, m);
  AlgorithmSpec wdq;
  wdq.algorithm = Algorithm::wdq;
  wdq.wdq_c = 10.0;
  specs.push_back(wdq);
  return sweep(opt, specs);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive distributional double Q-learning lab"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* sub, bool config_required) {
    auto* pos = sub->add_option("config-file", opt.config, "Config document (JSON)");
    auto* flag = sub->add_option("--config", opt.config, "Config document (JSON)");
    pos->excludes(flag);
    if (config_required) sub->callback([&, sub] {
        if (opt.config.empty()) throw CLI::RequiredError("config-file");
      });
    sub->add_option("--output", opt.output, "Output directory");
    sub->add_option("--jobs", opt.jobs, "Seeds run in parallel")->check(CLI::PositiveNumber);
    sub->add_option("--seed-offset", opt.seed_offset, "Added to every seed");
  };

  auto* run = app.add_subcommand("run", "Run one experiment configuration");
  add_common(run, true);
  auto* theory = app.add_subcommand("verify-theory", "Monte Carlo checks of the bias bound and variance law");
  add_common(theory, false);
  auto* oracle = app.add_subcommand("oracle", "Write Q* and categorical fixed-point golden files");
  add_common(oracle, true);
  auto* ablate = app.add_subcommand("ablate", "Sweep every beta schedule preset (plus WDQ c=10)");
  add_common(ablate, true);
  auto* compare = app.add_subcommand("compare", "Maxmin / EBQL / REDQ / WDQ comparison grid");
  add_common(compare, true);
  auto* report = app.add_subcommand("report", "Re-aggregate a run directory");
  std::string run_dir;
  report->add_option("run-dir", run_dir, "Directory written by run")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*run) return cmd_run(opt);
    if (*theory) return cmd_verify_theory(opt);
    if (*oracle) return cmd_oracle(opt);
    if (*ablate) return cmd_ablate(opt);
    if (*compare) return cmd_compare(opt);
    if (*report) return cmd_report(run_dir);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kConfigError;
}
