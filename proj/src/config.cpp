#include "addq/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace addq {

using nlohmann::json;

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
}

void require_object(const json& j, std::string_view where) {
  if (!j.is_object()) throw ConfigError(std::string(where) + ": expected an object");
}

void reject_unknown(const json& j, std::string_view where, std::set<std::string> allowed) {
  require_object(j, where);
  for (const auto& [key, _] : j.items())
    if (!allowed.count(key))
      throw ConfigError(std::string(where) + ": unknown key '" + key + "'");
}

template <class T>
T get_or(const json& j, const char* key, T fallback, std::string_view where) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string(where) + "." + key + ": wrong type");
  }
}

template <class T>
T get_required(const json& j, const char* key, std::string_view where) {
  if (!j.contains(key)) throw ConfigError(std::string(where) + ": missing '" + key + "'");
  return get_or<T>(j, key, T{}, where);
}

EnvironmentSpec parse_environment(const json& j) {
  require_object(j, "environment");
  const auto type = get_required<std::string>(j, "type", "environment");
  if (type == "bandit") {
    reject_unknown(j, "environment",
                   {"type", "k1", "k2", "mu1", "mu2", "sigma1", "sigma2", "gamma"});
    BanditSpec b;
    b.k1 = get_or(j, "k1", b.k1, "environment");
    b.k2 = get_or(j, "k2", b.k2, "environment");
    b.mu1 = get_or(j, "mu1", b.mu1, "environment");
    b.mu2 = get_or(j, "mu2", b.mu2, "environment");
    b.sigma1 = get_or(j, "sigma1", b.sigma1, "environment");
    b.sigma2 = get_or(j, "sigma2", b.sigma2, "environment");
    b.gamma = get_or(j, "gamma", b.gamma, "environment");
    return b;
  }
  if (type == "gridworld") {
    reject_unknown(j, "environment", {"type", "gamma", "step_cap"});
    GridWorldSpec g;
    g.gamma = get_or(j, "gamma", g.gamma, "environment");
    g.step_cap = get_or(j, "step_cap", g.step_cap, "environment");
    return g;
  }
  throw ConfigError("environment.type must be 'bandit' or 'gridworld', got '" + type + "'");
}

json environment_json(const EnvironmentSpec& env) {
  if (const auto* b = std::get_if<BanditSpec>(&env))
    return {{"type", "bandit"}, {"k1", b->k1},         {"k2", b->k2},
            {"mu1", b->mu1},    {"mu2", b->mu2},       {"sigma1", b->sigma1},
            {"sigma2", b->sigma2}, {"gamma", b->gamma}};
  const auto& g = std::get<GridWorldSpec>(env);
  return {{"type", "gridworld"}, {"gamma", g.gamma}, {"step_cap", g.step_cap}};
}

Support parse_support(const json& j, std::string_view where) {
  const auto lo = get_or(j, "theta_min", -3.0, where);
  const auto hi = get_or(j, "theta_max", 3.0, where);
  const auto m = get_or(j, "atoms", 51, where);
  try {
    return Support(lo, hi, m);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string(where) + ": " + e.what());
  }
}

std::optional<Representation> parse_representation(const json& j) {
  require_object(j, "representation");
  const auto type = get_required<std::string>(j, "type", "representation");
  if (type == "scalar") {
    reject_unknown(j, "representation", {"type"});
    return std::nullopt;
  }
  if (type == "categorical") {
    reject_unknown(j, "representation", {"type", "theta_min", "theta_max", "atoms"});
    return parse_support(j, "representation");
  }
  if (type == "quantile") {
    reject_unknown(j, "representation", {"type", "atoms"});
    const int m = get_or(j, "atoms", 51, "representation");
    if (m < 1) throw ConfigError("representation.atoms must be >= 1");
    return QuantileRepresentation{m};
  }
  throw ConfigError("representation.type must be scalar, categorical or quantile");
}

json representation_json(const std::optional<Representation>& r) {
  if (!r) return {{"type", "scalar"}};
  if (const auto* s = std::get_if<Support>(&*r))
    return {{"type", "categorical"},
            {"theta_min", s->min()},
            {"theta_max", s->max()},
            {"atoms", s->size()}};
  return {{"type", "quantile"}, {"atoms", std::get<QuantileRepresentation>(*r).atoms}};
}

ExplorationPolicy parse_exploration(const json& j) {
  require_object(j, "exploration");
  const auto type = get_required<std::string>(j, "type", "exploration");
  if (type == "uniform") {
    reject_unknown(j, "exploration", {"type"});
    return UniformExploration{};
  }
  if (type == "eps_greedy") {
    reject_unknown(j, "exploration", {"type", "eps_start", "eps_end", "decay_steps"});
    EpsGreedyLinear e;
    e.eps_start = get_or(j, "eps_start", e.eps_start, "exploration");
    e.eps_end = get_or(j, "eps_end", e.eps_end, "exploration");
    e.decay_steps = get_or(j, "decay_steps", e.decay_steps, "exploration");
    return e;
  }
  throw ConfigError("exploration.type must be 'eps_greedy' or 'uniform'");
}

json exploration_json(const ExplorationPolicy& p) {
  if (std::holds_alternative<UniformExploration>(p)) return {{"type", "uniform"}};
  const auto& e = std::get<EpsGreedyLinear>(p);
  return {{"type", "eps_greedy"},
          {"eps_start", e.eps_start},
          {"eps_end", e.eps_end},
          {"decay_steps", e.decay_steps}};
}

std::vector<std::uint64_t> parse_seeds(const json& j) {
  std::vector<std::uint64_t> seeds;
  if (j.is_array()) {
    for (const auto& s : j) {
      if (!s.is_number_unsigned()) throw ConfigError("seeds: entries must be non-negative integers");
      seeds.push_back(s.get<std::uint64_t>());
    }
  } else if (j.is_object()) {
    reject_unknown(j, "seeds", {"first", "count"});
    const auto first = get_or<std::uint64_t>(j, "first", 0, "seeds");
    const auto count = get_required<int>(j, "count", "seeds");
    if (count < 0) throw ConfigError("seeds.count must be non-negative");
    for (int i = 0; i < count; ++i) seeds.push_back(first + static_cast<std::uint64_t>(i));
  } else {
    throw ConfigError("seeds: expected a list or {first, count}");
  }
  return seeds;
}

}  // namespace

TabularModel make_model(const EnvironmentSpec& env) {
  if (const auto* b = std::get_if<BanditSpec>(&env)) return bandit_model(*b);
  return gridworld_model(std::get<GridWorldSpec>(env));
}

bool is_bandit(const EnvironmentSpec& env) { return std::holds_alternative<BanditSpec>(env); }

void validate(const ExperimentConfig& c) {
  if (c.eval_every < 1) throw ConfigError("eval_every must be >= 1");
  if (c.total_steps < 0) throw ConfigError("total_steps must be >= 0");
  if (c.eval_horizon < 1) throw ConfigError("eval_horizon must be >= 1");
  if (c.seeds.empty()) throw ConfigError("seeds must be non-empty");
  try {
    validate(c.algorithm);
    validate(c.exploration);
    make_model(c.environment);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

ExperimentConfig parse_experiment_config(std::string_view text) {
  const json j = parse_json(text);
  reject_unknown(j, "config",
                 {"environment", "algorithm", "representation", "exploration", "total_steps",
                  "eval_every", "eval_horizon", "seeds", "output_dir"});
  ExperimentConfig c;
  if (!j.contains("environment")) throw ConfigError("config: missing 'environment'");
  c.environment = parse_environment(j.at("environment"));

  if (!j.contains("algorithm")) throw ConfigError("config: missing 'algorithm'");
  const json& alg = j.at("algorithm");
  reject_unknown(alg, "algorithm",
                 {"name", "beta_schedule", "ensemble_size", "subset_size", "wdq_c"});
  try {
    c.algorithm.algorithm = parse_algorithm(get_required<std::string>(alg, "name", "algorithm"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  c.algorithm.beta_schedule = get_or(alg, "beta_schedule", c.algorithm.beta_schedule, "algorithm");
  c.algorithm.ensemble_size = get_or(alg, "ensemble_size", c.algorithm.ensemble_size, "algorithm");
  c.algorithm.subset_size = get_or(alg, "subset_size", c.algorithm.subset_size, "algorithm");
  c.algorithm.wdq_c = get_or(alg, "wdq_c", c.algorithm.wdq_c, "algorithm");
  if (j.contains("representation"))
    c.algorithm.representation = parse_representation(j.at("representation"));

  if (j.contains("exploration")) c.exploration = parse_exploration(j.at("exploration"));
  c.total_steps = get_required<long>(j, "total_steps", "config");
  c.eval_every = get_or(j, "eval_every", c.eval_every, "config");
  c.eval_horizon = get_or(j, "eval_horizon", is_bandit(c.environment) ? 3 : 6, "config");
  if (!j.contains("seeds")) throw ConfigError("config: missing 'seeds'");
  c.seeds = parse_seeds(j.at("seeds"));
  c.output_dir = get_or<std::string>(j, "output_dir", "", "config");
  validate(c);
  return c;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  return parse_experiment_config(read_file(path));
}

std::string to_json_text(const ExperimentConfig& c) {
  json alg = {{"name", std::string(to_string(c.algorithm.algorithm))},
              {"beta_schedule", c.algorithm.beta_schedule},
              {"ensemble_size", c.algorithm.ensemble_size},
              {"subset_size", c.algorithm.subset_size},
              {"wdq_c", c.algorithm.wdq_c}};
  json j = {{"environment", environment_json(c.environment)},
            {"algorithm", alg},
            {"representation", representation_json(c.algorithm.representation)},
            {"exploration", exploration_json(c.exploration)},
            {"total_steps", c.total_steps},
            {"eval_every", c.eval_every},
            {"eval_horizon", c.eval_horizon},
            {"seeds", c.seeds}};
  if (!c.output_dir.empty()) j["output_dir"] = c.output_dir;
  return j.dump(2) + "\n";
}

OracleConfig parse_oracle_config(std::string_view text) {
  const json j = parse_json(text);
  reject_unknown(j, "config", {"environment", "support", "tol"});
  OracleConfig c;
  if (!j.contains("environment")) throw ConfigError("config: missing 'environment'");
  c.environment = parse_environment(j.at("environment"));
  if (j.contains("support")) {
    reject_unknown(j.at("support"), "support", {"theta_min", "theta_max", "atoms"});
    c.support = parse_support(j.at("support"), "support");
  }
  c.tol = get_or(j, "tol", c.tol, "config");
  if (!(c.tol > 0.0)) throw ConfigError("tol must be positive");
  try {
    make_model(c.environment);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return c;
}

OracleConfig load_oracle_config(const std::filesystem::path& path) {
  return parse_oracle_config(read_file(path));
}

TheoryConfig parse_theory_config(std::string_view text) {
  const json j = parse_json(text);
  reject_unknown(j, "config", {"variance_law", "bias_bound"});
  TheoryConfig c;
  if (j.contains("variance_law")) {
    if (!j.at("variance_law").is_array()) throw ConfigError("variance_law: expected a list");
    for (const json& e : j.at("variance_law")) {
      reject_unknown(e, "variance_law", {"k", "sigma", "N", "replicates", "seed"});
      VarianceLawParams p;
      p.k = get_or(e, "k", p.k, "variance_law");
      p.sigma = get_or(e, "sigma", p.sigma, "variance_law");
      p.N = get_or(e, "N", p.N, "variance_law");
      p.replicates = get_or(e, "replicates", p.replicates, "variance_law");
      p.seed = get_or(e, "seed", p.seed, "variance_law");
      if (p.k < 1 || p.N < 2 || !(p.sigma > 0.0) || p.replicates < 500)
        throw ConfigError("variance_law: need k >= 1, N >= 2, sigma > 0, replicates >= 500");
      c.variance_law.push_back(p);
    }
  } else {
    c.variance_law.push_back({});
  }
  if (j.contains("bias_bound")) {
    if (!j.at("bias_bound").is_array()) throw ConfigError("bias_bound: expected a list");
    for (const json& e : j.at("bias_bound")) {
      reject_unknown(e, "bias_bound", {"gamma", "sigma", "k", "N", "replicates", "seed"});
      BiasBoundParams p;
      p.gamma = get_or(e, "gamma", p.gamma, "bias_bound");
      p.sigma = get_or(e, "sigma", p.sigma, "bias_bound");
      p.k = get_or(e, "k", p.k, "bias_bound");
      p.N = get_or(e, "N", p.N, "bias_bound");
      p.replicates = get_or(e, "replicates", p.replicates, "bias_bound");
      p.seed = get_or(e, "seed", p.seed, "bias_bound");
      if (p.k < 1 || p.N < 2 || p.sigma < 0.0 || p.replicates < 500)
        throw ConfigError("bias_bound: need k >= 1, N >= 2, sigma >= 0, replicates >= 500");
      c.bias_bound.push_back(p);
    }
  } else {
    c.bias_bound.push_back({});
    c.bias_bound.push_back({0.9, 1.0, 20, 25, 2000, 3});
  }
  return c;
}

TheoryConfig load_theory_config(const std::filesystem::path& path) {
  return parse_theory_config(read_file(path));
}

}  // namespace addq
