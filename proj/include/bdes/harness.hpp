#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "bdes/env.hpp"
#include "bdes/evaluation.hpp"
#include "bdes/instance.hpp"
#include "bdes/planner.hpp"

namespace bdes {

// (1/2, 1) and (3/4 - eps/2, 1/2 + 2 eps), lambda = 1, q0 = 1.
Instance gen_proposition1_instance(double eps, int horizon = 1000);

// FNV-1a over the fields, finished with splitmix64.
std::uint64_t replication_seed(std::uint64_t base, const std::string& instance_id,
                               const std::string& algo, std::uint64_t seed_index);

struct AlgoSpec {
  std::string name;   // learner key
  std::string label;  // name unless overridden; used in output and seeding
  nlohmann::json overrides = nlohmann::json::object();
};

struct InstanceSpec {
  std::string id;
  Instance instance;
};

struct ExperimentConfig {
  std::string name = "experiment";
  std::vector<InstanceSpec> instances;  // after sweeps are expanded
  std::vector<AlgoSpec> algos;
  std::uint64_t base_seed = 0;
  std::vector<std::uint64_t> seed_indices;
  std::vector<int> checkpoints;  // explicit rounds; with every = 0 and none given: powers of 2 and T
  int every = 0;                 // also emit every n-th round
  std::string output = "out";
  PlannerOptions planner;
  nlohmann::json source;  // the parsed input, kept for the manifest
};

// Throws ConfigError. base_dir resolves relative instance file references.
ExperimentConfig parse_config(const nlohmann::json& j, const std::string& base_dir = ".");
ExperimentConfig load_config(const std::string& path);
// Canonical JSON of a parsed config (instances inline); what the manifest stores.
nlohmann::json resolved_config(const ExperimentConfig& cfg);
std::vector<int> checkpoints_for(const ExperimentConfig& cfg, int T);

std::vector<std::string> preset_names();
nlohmann::json preset_config(const std::string& name);

std::vector<std::string> learner_names();

// Runs one learner to the horizon. plan is needed by fixed_plan only.
Trajectory run_learner(const AlgoSpec& algo, const Instance& inst, std::uint64_t seed,
                       const Plan* plan = nullptr);

struct RunOutputs {
  std::vector<std::string> files;
  bool any_flag = false;
};

// Writes regret.csv, summary.csv, flags.csv, manifest.json under cfg.output.
RunOutputs run_experiment(const ExperimentConfig& cfg, int jobs = 1);

std::string config_hash(const nlohmann::json& j);

inline constexpr const char* kVersion = "0.1.0";

}  // namespace bdes
