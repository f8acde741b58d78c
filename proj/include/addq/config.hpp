#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "addq/environment.hpp"
#include "addq/exploration.hpp"
#include "addq/learner.hpp"

namespace addq {

/// Malformed, incomplete or inconsistent configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using EnvironmentSpec = std::variant<BanditSpec, GridWorldSpec>;

TabularModel make_model(const EnvironmentSpec& env);
bool is_bandit(const EnvironmentSpec& env);

struct ExperimentConfig {
  EnvironmentSpec environment = GridWorldSpec{};
  AlgorithmSpec algorithm;
  ExplorationPolicy exploration = EpsGreedyLinear{};
  long total_steps = 0;
  long eval_every = 500;
  int eval_horizon = 6;
  std::vector<std::uint64_t> seeds;
  std::string output_dir;
};

/// Throws ConfigError if an invariant is violated.
void validate(const ExperimentConfig& config);

/// JSON document; see README for the schema. Unknown keys are rejected.
ExperimentConfig parse_experiment_config(std::string_view json_text);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);
/// Canonical JSON form (every field explicit); parses back to the same config.
std::string to_json_text(const ExperimentConfig& config);

/// Environment-only document: {"environment": {...}, "support": {...}}.
struct OracleConfig {
  EnvironmentSpec environment = GridWorldSpec{};
  Support support{-3.0, 3.0, 51};
  double tol = 1e-10;
};

OracleConfig load_oracle_config(const std::filesystem::path& path);
OracleConfig parse_oracle_config(std::string_view json_text);

struct VarianceLawParams {
  int k = 5;
  double sigma = 1.0;
  int N = 30;
  int replicates = 2000;
  std::uint64_t seed = 1;
};

struct BiasBoundParams {
  double gamma = 0.9;
  double sigma = 5.0;
  int k = 5;
  int N = 100;
  int replicates = 2000;
  std::uint64_t seed = 2;
};

/// Missing sections fall back to the default checks: one variance-law run
/// and the two bias-bound runs (sigma=5, k=5, N=100) and (sigma=1, k=20, N=25).
struct TheoryConfig {
  std::vector<VarianceLawParams> variance_law;
  std::vector<BiasBoundParams> bias_bound;
};

TheoryConfig parse_theory_config(std::string_view json_text);
TheoryConfig load_theory_config(const std::filesystem::path& path);

}  // namespace addq
