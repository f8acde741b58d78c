#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "addq/config.hpp"
#include "addq/learner.hpp"
#include "addq/tables.hpp"

namespace addq {

struct EvalRow {
  long step = 0;
  double eval_return = 0.0;
  int correct_action = 0;
  double summed_abs_bias = 0.0;
  double max_abs_bias = 0.0;
  std::vector<double> q;     // per pair
  std::vector<double> s2;    // per pair; empty for scalar learners
  std::vector<double> bias;  // per pair
};

struct RunRecord {
  std::uint64_t seed = 0;
  std::vector<EvalRow> rows;
};

/// Train/eval stream seeds of one run.
inline std::uint64_t train_seed(std::uint64_t seed) { return derive_seed(seed, 0); }
inline std::uint64_t eval_seed(std::uint64_t seed) { return derive_seed(seed, 1); }

/// Greedy rollout of `horizon` steps from the start state; stops early at a
/// terminal state. Returns the undiscounted reward sum. Never touches the
/// learner's state.
double greedy_rollout(const TabularModel& model, const Learner& learner, int horizon, Rng& rng);

/// One seed of `config`, with Q* from value iteration for the bias columns.
RunRecord run_single(const ExperimentConfig& config, const TabularModel& model,
                     const QTable& q_star, std::uint64_t seed);

/// All seeds of `config`, at most `jobs` in parallel. Records come back in
/// seed order.
std::vector<RunRecord> run_experiment(const ExperimentConfig& config, int jobs = 1);

/// Column-named numeric table as stored in the CSV files.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  /// Throws std::out_of_range for unknown columns.
  int column(std::string_view name) const;
};

/// step, seed, eval_return, correct_action, summed_abs_bias, q_s_a...,
/// [s2_s_a...], bias_s_a...
std::vector<std::string> csv_columns(const TabularModel& model, bool distributional);
Table to_table(const RunRecord& record, const TabularModel& model, bool distributional);

/// step and seed print as integers, the rest with 9 significant digits.
void write_csv(std::ostream& out, const Table& table);
/// Throws std::runtime_error on malformed input.
Table read_csv(std::istream& in);

struct Summary {
  std::vector<std::string> columns;  // every column except step and seed
  std::vector<long> steps;
  std::vector<std::vector<double>> mean;    // [step][column]
  std::vector<std::vector<double>> stderr_;  // sample sd / sqrt(n); 0 for one seed
  int seeds = 0;
};

/// Per-step mean and standard error across runs. Throws std::invalid_argument
/// for an empty input or ragged runs (different columns or steps).
Summary aggregate(std::span<const Table> runs);

/// Trailing moving average; the first window-1 points average what exists.
std::vector<double> rolling_mean(std::span<const double> xs, int window = 4);

/// step, then <col>_mean and <col>_stderr for every column.
void write_aggregate_csv(std::ostream& out, const Summary& s);
/// step, then smoothed mean and stderr of eval_return, correct_action and
/// summed_abs_bias.
void write_plot_csv(std::ostream& out, const Summary& s, int window = 4);

/// Writes seed_<seed>.csv per run, config.json, aggregate.csv and plot.csv.
void write_run_directory(const std::filesystem::path& dir, const ExperimentConfig& config,
                         std::span<const RunRecord> records);

/// Re-reads the seed_*.csv files of a run directory (seed order) and rewrites
/// aggregate.csv and plot.csv. Returns the summary.
Summary report_run_directory(const std::filesystem::path& dir);

}  // namespace addq
