#include "addq/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "addq/exploration.hpp"
#include "addq/oracle.hpp"
#include "addq/updates.hpp"

namespace addq {

double greedy_rollout(const TabularModel& model, const Learner& learner, int horizon, Rng& rng) {
  int state = model.start_state();
  double total = 0.0;
  for (int t = 0; t < horizon; ++t) {
    const auto values = learner.action_values(state);
    const Transition tr = sample_transition(model, state, select_greedy(values), rng);
    total += tr.reward;
    if (tr.terminal) break;
    state = tr.next_state;
  }
  return total;
}

namespace {

std::vector<double> flat_values(const TabularModel& model, const Learner& learner) {
  std::vector<double> out;
  out.reserve(model.num_pairs());
  for (int s = 0; s < model.num_states(); ++s) {
    const auto row = learner.action_values(s);
    out.insert(out.end(), row.begin(), row.end());
  }
  return out;
}

std::vector<double> flat_variances(const TabularModel& model, const Learner& learner) {
  std::vector<double> out;
  out.reserve(model.num_pairs());
  for (int s = 0; s < model.num_states(); ++s) {
    const auto row = learner.action_variances(s);
    out.insert(out.end(), row.begin(), row.end());
  }
  return out;
}

}  // namespace

RunRecord run_single(const ExperimentConfig& config, const TabularModel& model,
                     const QTable& q_star, std::uint64_t seed) {
  auto learner = make_learner(config.algorithm, model);
  Rng train(train_seed(seed));
  Rng eval(eval_seed(seed));
  const auto optimal = greedy_sets(q_star);
  const int start = model.start_state();

  RunRecord record;
  record.seed = seed;
  record.rows.reserve(static_cast<std::size_t>(config.total_steps / config.eval_every + 1));

  auto evaluate = [&](long step) {
    EvalRow row;
    row.step = step;
    row.q = flat_values(model, *learner);
    if (learner->is_distributional()) row.s2 = flat_variances(model, *learner);
    const BiasReport rep = bias_report(model, row.q, q_star);
    row.bias = rep.bias;
    row.summed_abs_bias = rep.summed_abs_bias;
    row.max_abs_bias = rep.max_abs_bias;
    const int first = select_greedy(learner->action_values(start));
    const auto& best = optimal[start];
    row.correct_action = std::find(best.begin(), best.end(), first) != best.end() ? 1 : 0;
    row.eval_return = greedy_rollout(model, *learner, config.eval_horizon, eval);
    record.rows.push_back(std::move(row));
  };

  evaluate(0);
  int state = start;
  int episode_steps = 0;
  for (long step = 0; step < config.total_steps; ++step) {
    const auto values = learner->action_values(state);
    const int action = act(config.exploration, values, step, train);
    const Transition tr = sample_transition(model, state, action, train);
    learner->update(tr, train);
    ++episode_steps;
    if (tr.terminal || episode_steps >= model.episode_cap()) {
      state = start;
      episode_steps = 0;
    } else {
      state = tr.next_state;
    }
    if ((step + 1) % config.eval_every == 0) evaluate(step + 1);
  }
  return record;
}

std::vector<RunRecord> run_experiment(const ExperimentConfig& config, int jobs) {
  validate(config);
  const TabularModel model = make_model(config.environment);
  const QTable q_star = value_iteration(model).q;
  const std::size_t n = config.seeds.size();
  std::vector<RunRecord> out(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        out[i] = run_single(config, model, q_star, config.seeds[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int threads = std::clamp(jobs, 1, static_cast<int>(std::max<std::size_t>(n, 1)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

int Table::column(std::string_view name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw std::out_of_range("no column '" + std::string(name) + "'");
  return static_cast<int>(it - columns.begin());
}

std::vector<std::string> csv_columns(const TabularModel& model, bool distributional) {
  std::vector<std::string> cols = {"step", "seed", "eval_return", "correct_action",
                                   "summed_abs_bias"};
  auto per_pair = [&](const std::string& prefix) {
    for (int s = 0; s < model.num_states(); ++s)
      for (int a = 0; a < model.num_actions(s); ++a)
        cols.push_back(prefix + std::to_string(s) + "_" + std::to_string(a));
  };
  per_pair("q_");
  if (distributional) per_pair("s2_");
  per_pair("bias_");
  return cols;
}

Table to_table(const RunRecord& record, const TabularModel& model, bool distributional) {
  Table t{csv_columns(model, distributional), {}};
  for (const EvalRow& r : record.rows) {
    std::vector<double> row = {static_cast<double>(r.step), static_cast<double>(record.seed),
                               r.eval_return, static_cast<double>(r.correct_action),
                               r.summed_abs_bias};
    row.insert(row.end(), r.q.begin(), r.q.end());
    if (distributional) row.insert(row.end(), r.s2.begin(), r.s2.end());
    row.insert(row.end(), r.bias.begin(), r.bias.end());
    if (row.size() != t.columns.size()) throw std::logic_error("to_table: row width mismatch");
    t.rows.push_back(std::move(row));
  }
  return t;
}

namespace {

void write_row(std::ostream& out, const std::vector<double>& row, int step_col, int seed_col,
               const std::uint64_t* seed) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) out << ',';
    if (static_cast<int>(i) == step_col)
      out << static_cast<long long>(row[i]);
    else if (static_cast<int>(i) == seed_col && seed)
      out << *seed;
    else if (static_cast<int>(i) == seed_col)
      out << static_cast<unsigned long long>(row[i]);
    else
      out << row[i];
  }
  out << '\n';
}

void write_header(std::ostream& out, const std::vector<std::string>& cols) {
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
}

int find_column(const std::vector<std::string>& cols, std::string_view name) {
  const auto it = std::find(cols.begin(), cols.end(), name);
  return it == cols.end() ? -1 : static_cast<int>(it - cols.begin());
}

// Seeds can exceed 2^53, so run files print the exact seed instead of the
// table's double.
void write_table(std::ostream& out, const Table& table, const std::uint64_t* seed) {
  const auto old = out.precision(9);
  write_header(out, table.columns);
  const int step_col = find_column(table.columns, "step");
  const int seed_col = find_column(table.columns, "seed");
  for (const auto& row : table.rows) write_row(out, row, step_col, seed_col, seed);
  out.precision(old);
}

}  // namespace

void write_csv(std::ostream& out, const Table& table) { write_table(out, table, nullptr); }

Table read_csv(std::istream& in) {
  Table t;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("read_csv: empty input");
  {
    std::istringstream header(line);
    std::string cell;
    while (std::getline(header, cell, ',')) t.columns.push_back(cell);
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
        if (used != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw std::runtime_error("read_csv: bad number '" + cell + "'");
      }
    }
    if (row.size() != t.columns.size()) throw std::runtime_error("read_csv: ragged row");
    t.rows.push_back(std::move(row));
  }
  return t;
}

Summary aggregate(std::span<const Table> runs) {
  if (runs.empty()) throw std::invalid_argument("aggregate: no runs");
  const Table& first = runs.front();
  const int step_col = first.column("step");
  const int seed_col = find_column(first.columns, "seed");
  Summary s;
  s.seeds = static_cast<int>(runs.size());
  std::vector<int> keep;
  for (int c = 0; c < static_cast<int>(first.columns.size()); ++c)
    if (c != step_col && c != seed_col) {
      keep.push_back(c);
      s.columns.push_back(first.columns[c]);
    }
  for (const Table& t : runs) {
    if (t.columns != first.columns || t.rows.size() != first.rows.size())
      throw std::invalid_argument("aggregate: runs have different shapes");
    for (std::size_t r = 0; r < t.rows.size(); ++r)
      if (t.rows[r][step_col] != first.rows[r][step_col])
        throw std::invalid_argument("aggregate: runs have different evaluation steps");
  }
  const double n = static_cast<double>(runs.size());
  for (std::size_t r = 0; r < first.rows.size(); ++r) {
    s.steps.push_back(static_cast<long>(first.rows[r][step_col]));
    std::vector<double> mean(keep.size()), se(keep.size());
    for (std::size_t k = 0; k < keep.size(); ++k) {
      double sum = 0.0;
      for (const Table& t : runs) sum += t.rows[r][keep[k]];
      const double m = sum / n;
      double ss = 0.0;
      for (const Table& t : runs) ss += (t.rows[r][keep[k]] - m) * (t.rows[r][keep[k]] - m);
      mean[k] = m;
      se[k] = runs.size() > 1 ? std::sqrt(ss / (n - 1.0)) / std::sqrt(n) : 0.0;
    }
    s.mean.push_back(std::move(mean));
    s.stderr_.push_back(std::move(se));
  }
  return s;
}

std::vector<double> rolling_mean(std::span<const double> xs, int window) {
  if (window < 1) throw std::invalid_argument("rolling_mean: window must be >= 1");
  std::vector<double> out(xs.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sum += xs[i];
    if (i >= static_cast<std::size_t>(window)) sum -= xs[i - window];
    const std::size_t count = std::min<std::size_t>(i + 1, window);
    out[i] = sum / static_cast<double>(count);
  }
  return out;
}

void write_aggregate_csv(std::ostream& out, const Summary& s) {
  const auto old = out.precision(9);
  out << "step";
  for (const auto& c : s.columns) out << ',' << c << "_mean," << c << "_stderr";
  out << '\n';
  for (std::size_t r = 0; r < s.steps.size(); ++r) {
    out << s.steps[r];
    for (std::size_t k = 0; k < s.columns.size(); ++k)
      out << ',' << s.mean[r][k] << ',' << s.stderr_[r][k];
    out << '\n';
  }
  out.precision(old);
}

void write_plot_csv(std::ostream& out, const Summary& s, int window) {
  const std::vector<std::string> series = {"eval_return", "correct_action", "summed_abs_bias"};
  std::vector<std::vector<double>> cols;
  for (const auto& name : series) {
    const int k = find_column(s.columns, name);
    if (k < 0) throw std::invalid_argument("write_plot_csv: missing column " + name);
    std::vector<double> m, e;
    for (std::size_t r = 0; r < s.steps.size(); ++r) {
      m.push_back(s.mean[r][k]);
      e.push_back(s.stderr_[r][k]);
    }
    cols.push_back(rolling_mean(m, window));
    cols.push_back(rolling_mean(e, window));
  }
  const auto old = out.precision(9);
  out << "step";
  for (const auto& name : series) out << ',' << name << "_mean," << name << "_stderr";
  out << '\n';
  for (std::size_t r = 0; r < s.steps.size(); ++r) {
    out << s.steps[r];
    for (const auto& c : cols) out << ',' << c[r];
    out << '\n';
  }
  out.precision(old);
}

namespace {

std::filesystem::path seed_file(const std::filesystem::path& dir, std::uint64_t seed) {
  return dir / ("seed_" + std::to_string(seed) + ".csv");
}

void write_summary_files(const std::filesystem::path& dir, const Summary& s) {
  std::ofstream agg(dir / "aggregate.csv");
  write_aggregate_csv(agg, s);
  std::ofstream plot(dir / "plot.csv");
  write_plot_csv(plot, s);
  if (!agg || !plot) throw std::runtime_error("cannot write summary files in " + dir.string());
}

}  // namespace

void write_run_directory(const std::filesystem::path& dir, const ExperimentConfig& config,
                         std::span<const RunRecord> records) {
  std::filesystem::create_directories(dir);
  const TabularModel model = make_model(config.environment);
  const bool dist = is_distributional(config.algorithm.algorithm);
  for (const RunRecord& rec : records) {
    std::ofstream out(seed_file(dir, rec.seed));
    write_table(out, to_table(rec, model, dist), &rec.seed);
    if (!out) throw std::runtime_error("cannot write " + seed_file(dir, rec.seed).string());
  }
  {
    std::ofstream out(dir / "config.json");
    // Without output_dir, so the directory can move and repeated runs match byte for byte.
    ExperimentConfig stored = config;
    stored.output_dir.clear();
    out << to_json_text(stored);
  }
  // Aggregate from the files as written so a later report reproduces it.
  report_run_directory(dir);
}

Summary report_run_directory(const std::filesystem::path& dir) {
  std::vector<std::uint64_t> seeds;
  if (std::filesystem::exists(dir / "config.json")) {
    seeds = load_experiment_config(dir / "config.json").seeds;
  } else {
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
      const std::string name = entry.path().filename().string();
      if (name.rfind("seed_", 0) == 0 && entry.path().extension() == ".csv")
        seeds.push_back(std::stoull(name.substr(5, name.size() - 9)));
    }
    std::sort(seeds.begin(), seeds.end());
  }
  if (seeds.empty()) throw std::runtime_error("no seed_*.csv files in " + dir.string());
  std::vector<Table> tables;
  for (std::uint64_t seed : seeds) {
    std::ifstream in(seed_file(dir, seed));
    if (!in) throw std::runtime_error("missing " + seed_file(dir, seed).string());
    tables.push_back(read_csv(in));
  }
  Summary s = aggregate(tables);
  write_summary_files(dir, s);
  return s;
}

}  // namespace addq
