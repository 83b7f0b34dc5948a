// bdes: run experiments, plan instances, check configs.
#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "bdes/errors.hpp"
#include "bdes/harness.hpp"
#include "bdes/planner.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitFlagged = 3;

int default_jobs() {
  if (const char* e = std::getenv("BDES_JOBS")) {
    int n = std::atoi(e);
    if (n > 0) return n;
  }
  return 1;
}

bdes::ExperimentConfig resolve(const std::string& config, const std::string& preset) {
  if (!config.empty() && !preset.empty()) throw bdes::ConfigError("give --config or --preset, not both");
  if (!config.empty()) return bdes::load_config(config);
  if (!preset.empty()) return bdes::parse_config(bdes::preset_config(preset));
  throw bdes::ConfigError("one of --config or --preset is required");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"B-DES simulation lab"};
  app.require_subcommand(1);
  app.set_version_flag("--version", bdes::kVersion);

  std::string config, preset, out, instance_path;
  int jobs = default_jobs();
  double fptas_eps = 0.0, cap = bdes::kDefaultExactCap;
  bool as_json = false;

  auto* run = app.add_subcommand("run", "run an experiment and write CSVs plus a manifest");
  run->add_option("--config", config, "experiment JSON (a manifest.json also works)");
  run->add_option("--preset", preset, "named preset");
  run->add_option("--out", out, "output directory (overrides the config)");
  run->add_option("-j,--jobs", jobs, "worker threads (default $BDES_JOBS or 1)")->check(CLI::PositiveNumber);

  auto* plan = app.add_subcommand("plan", "benchmark plan for one instance");
  plan->add_option("--instance,instance", instance_path, "instance JSON")->required();
  plan->add_option("--epsilon", fptas_eps, "use the FPTAS above the exact cap");
  plan->add_option("--exact-cap", cap, "max K^T for exhaustive search");
  plan->add_flag("--json", as_json, "print the full plan as JSON");

  auto* validate = app.add_subcommand("validate", "parse a config or preset and report what it expands to");
  validate->add_option("--config", config);
  validate->add_option("--preset", preset);

  auto* presets = app.add_subcommand("presets", "list presets, or print one as JSON");
  std::string show;
  presets->add_option("name", show);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      auto cfg = resolve(config, preset);
      if (!out.empty()) cfg.output = out;
      auto res = bdes::run_experiment(cfg, jobs);
      for (const auto& f : res.files) std::cout << f << "\n";
      if (res.any_flag) {
        std::cerr << "warning: some replications raised flags, see flags.csv\n";
        return kExitFlagged;
      }
      return 0;
    }
    if (*plan) {
      bdes::Instance inst;
      try {
        inst = bdes::load_instance(instance_path);
      } catch (const bdes::DomainError& e) {
        throw bdes::ConfigError(e.what());
      }
      bdes::PlannerOptions po;
      po.exact_cap = cap;
      po.fptas_epsilon = fptas_eps;
      bdes::Plan p = bdes::benchmark_opt(inst, po);
      if (as_json) {
        std::cout << bdes::plan_to_json(p).dump(2) << "\n";
      } else {
        std::cout << "opt " << p.expected_total << "\n";
        std::size_t show_n = std::min<std::size_t>(p.sequence.size(), 40);
        std::cout << "prefix";
        for (std::size_t t = 0; t < show_n; ++t) std::cout << " " << p.sequence[t];
        if (show_n < p.sequence.size()) std::cout << " ...";
        std::cout << "\n";
      }
      return 0;
    }
    if (*validate) {
      auto cfg = resolve(config, preset);
      std::cout << cfg.name << ": " << cfg.instances.size() << " instance(s), " << cfg.algos.size()
                << " algo(s), " << cfg.seed_indices.size() << " seed(s)\n";
      for (const auto& s : cfg.instances) {
        std::cout << "  " << s.id << "  K=" << s.instance.num_arms() << " T=" << s.instance.horizon
                  << " lambda=" << s.instance.lambda << "\n";
      }
      std::cout << "hash " << bdes::config_hash(bdes::resolved_config(cfg)) << "\n";
      return 0;
    }
    if (*presets) {
      if (show.empty()) {
        for (const auto& n : bdes::preset_names()) std::cout << n << "\n";
      } else {
        std::cout << bdes::preset_config(show).dump(2) << "\n";
      }
      return 0;
    }
  } catch (const bdes::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
