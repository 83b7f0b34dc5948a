#include "bdes/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "bdes/errors.hpp"
#include "bdes/learners.hpp"
#include "bdes/rng.hpp"

namespace bdes {

namespace fs = std::filesystem;

Instance gen_proposition1_instance(double eps, int horizon) {
  if (!(eps > 0.0 && eps < 0.25)) throw DomainError("proposition1 instance: eps must be in (0, 1/4)");
  Instance inst;
  inst.arms = {{0.5, 1.0}, {0.75 - eps / 2.0, 0.5 + 2.0 * eps}};
  inst.lambda = 1.0;
  inst.q0 = 1.0;
  inst.horizon = horizon;
  inst.validate();
  return inst;
}

namespace {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

void fnv_bytes(std::uint64_t& h, const void* data, std::size_t n) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t k = 0; k < n; ++k) {
    h ^= p[k];
    h *= kFnvPrime;
  }
}

void fnv_u64(std::uint64_t& h, std::uint64_t v) {
  unsigned char b[8];
  for (int k = 0; k < 8; ++k) b[k] = static_cast<unsigned char>(v >> (8 * k));  // little endian on every host
  fnv_bytes(h, b, 8);
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

}  // namespace

std::uint64_t replication_seed(std::uint64_t base, const std::string& instance_id,
                               const std::string& algo, std::uint64_t seed_index) {
  std::uint64_t h = kFnvOffset;
  fnv_u64(h, base);
  fnv_bytes(h, instance_id.data(), instance_id.size());
  fnv_bytes(h, "\0", 1);
  fnv_bytes(h, algo.data(), algo.size());
  fnv_bytes(h, "\0", 1);
  fnv_u64(h, seed_index);
  return splitmix64(h);
}

std::string config_hash(const nlohmann::json& j) {
  std::string s = j.dump();
  std::uint64_t h = kFnvOffset;
  fnv_bytes(h, s.data(), s.size());
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// ---------------------------------------------------------------- learners

namespace {

const std::map<std::string, std::set<std::string>>& allowed_overrides() {
  static const std::map<std::string, std::set<std::string>> m = {
      {"etc_known", {"epsilon", "M", "i_R", "dp_epsilon"}},
      {"etc_unknown", {"epsilon", "M", "dp_epsilon"}},
      {"exp3p", {"delta_conf", "eta", "gamma", "beta"}},
      {"batched_sticky", {"B"}},
      {"unknown_lambda", {"delta", "M", "i_R", "epsilon", "dp_epsilon"}},
      {"ucb1", {}},
      {"exp3", {"gamma", "eta"}},
      {"aae", {}},
      {"fixed_plan", {}},
  };
  return m;
}

std::optional<double> opt_num(const nlohmann::json& o, const char* key) {
  if (!o.contains(key)) return std::nullopt;
  return o.at(key).get<double>();
}

std::optional<int> opt_int(const nlohmann::json& o, const char* key) {
  if (!o.contains(key)) return std::nullopt;
  return o.at(key).get<int>();
}

}  // namespace

std::vector<std::string> learner_names() {
  std::vector<std::string> v;
  for (const auto& [k, _] : allowed_overrides()) v.push_back(k);
  return v;
}

Trajectory run_learner(const AlgoSpec& algo, const Instance& inst, std::uint64_t seed, const Plan* plan) {
  Rng env_rng(seed);
  Rng alg_rng(splitmix64(seed ^ 0x6a09e667f3bcc909ULL));
  Env env(inst, env_rng);
  const nlohmann::json& o = algo.overrides;
  const std::string& n = algo.name;

  auto etc_opts = [&]() {
    EtcOptions eo;
    eo.epsilon = opt_num(o, "epsilon");
    eo.M = opt_int(o, "M");
    eo.dp_epsilon = opt_num(o, "dp_epsilon").value_or(0.0);
    if (o.contains("i_R")) eo.i_R = o.at("i_R").get<std::size_t>();
    return eo;
  };

  if (n == "etc_known") {
    EtcOptions eo = etc_opts();
    std::size_t i_R = 0;
    if (eo.i_R) {
      i_R = *eo.i_R;
    } else {
      // the replenishing arm is known by assumption; take the largest end state
      for (std::size_t i = 1; i < inst.num_arms(); ++i)
        if (inst.arms[i].b > inst.arms[i_R].b) i_R = i;
    }
    etc_known_ir(env, i_R, alg_rng, eo);
  } else if (n == "etc_unknown") {
    etc_unknown_ir(env, alg_rng, etc_opts());
  } else if (n == "exp3p") {
    Exp3pOptions eo;
    eo.delta_conf = opt_num(o, "delta_conf");
    eo.eta = opt_num(o, "eta");
    eo.gamma = opt_num(o, "gamma");
    eo.beta = opt_num(o, "beta");
    exp3p(env, alg_rng, eo);
  } else if (n == "batched_sticky") {
    StickyOptions so;
    so.B = opt_int(o, "B");
    batched_sticky(env, alg_rng, so);
  } else if (n == "unknown_lambda") {
    UnknownLambdaOptions uo;
    uo.delta = opt_num(o, "delta").value_or(uo.delta);
    uo.M = opt_int(o, "M");
    uo.etc = etc_opts();
    uo.etc.M.reset();
    unknown_lambda(env, alg_rng, uo);
  } else if (n == "ucb1") {
    ucb1(env);
  } else if (n == "exp3") {
    Exp3Options eo;
    eo.gamma = opt_num(o, "gamma");
    eo.eta = opt_num(o, "eta");
    exp3(env, alg_rng, eo);
  } else if (n == "aae") {
    aae(env);
  } else if (n == "fixed_plan") {
    if (!plan) throw ConfigError("fixed_plan needs a benchmark plan");
    play_sequence(env, plan->sequence);
  } else {
    throw ConfigError("unknown algo '" + n + "'");
  }
  return env.take_trajectory();
}

// ---------------------------------------------------------------- config

namespace {

Instance parse_instance_node(const nlohmann::json& node, const std::string& base_dir) {
  if (node.is_string()) {
    fs::path p = node.get<std::string>();
    if (p.is_relative()) p = fs::path(base_dir) / p;
    return load_instance(p.string());
  }
  if (!node.is_object()) throw ConfigError("instance must be an object or a file path");
  if (node.contains("generator")) {
    std::string g = node.at("generator").get<std::string>();
    if (g != "proposition1") throw ConfigError("unknown instance generator '" + g + "'");
    double eps = node.at("eps").get<double>();
    int T = node.value("horizon", 1000);
    Instance inst = gen_proposition1_instance(eps, T);
    if (node.contains("lambda")) inst.lambda = node.at("lambda").get<double>();
    if (node.contains("q0")) inst.q0 = node.at("q0").get<double>();
    inst.validate();
    return inst;
  }
  return instance_from_json(node);
}

std::string num_tag(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

}  // namespace

ExperimentConfig parse_config(const nlohmann::json& j, const std::string& base_dir) {
  try {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    ExperimentConfig cfg;
    cfg.source = j;
    cfg.name = j.value("name", std::string("experiment"));

    std::vector<InstanceSpec> base;
    if (j.contains("instances")) {
      for (const auto& e : j.at("instances")) {
        InstanceSpec s;
        s.id = e.at("id").get<std::string>();
        s.instance = parse_instance_node(e.at("instance"), base_dir);
        base.push_back(std::move(s));
      }
    } else if (j.contains("instance")) {
      InstanceSpec s;
      s.id = j.value("instance_id", std::string("inst"));
      s.instance = parse_instance_node(j.at("instance"), base_dir);
      base.push_back(std::move(s));
    } else {
      throw ConfigError("config needs 'instance' or 'instances'");
    }
    if (base.empty()) throw ConfigError("no instances");
    std::set<std::string> ids;
    for (const auto& s : base) {
      if (s.id.empty() || s.id.find_first_of(",\n\r\"") != std::string::npos) {
        throw ConfigError("instance id '" + s.id + "' must be non-empty and CSV-safe");
      }
      if (!ids.insert(s.id).second) throw ConfigError("duplicate instance id '" + s.id + "'");
    }

    auto num_list = [&](const char* key) {
      std::vector<double> v;
      if (j.contains(key)) {
        for (const auto& x : j.at(key)) v.push_back(x.get<double>());
        if (v.empty()) throw ConfigError(std::string("'") + key + "' must not be empty");
      }
      return v;
    };
    std::vector<double> horizons = num_list("horizons");
    std::vector<double> lambdas = num_list("lambdas");
    std::vector<double> sigmas = num_list("sigmas");
    for (double l : lambdas)
      if (!(l >= 0.0 && l <= 1.0)) throw ConfigError("lambda sweep values must be in [0,1]");

    for (const auto& b : base) {
      std::vector<InstanceSpec> cur{b};
      auto expand = [&](const std::vector<double>& vals, const char* tag, auto apply) {
        if (vals.empty()) return;
        std::vector<InstanceSpec> next;
        for (const auto& s : cur) {
          for (double v : vals) {
            InstanceSpec t = s;
            apply(t.instance, v);
            t.id += std::string("_") + tag + num_tag(v);
            next.push_back(std::move(t));
          }
        }
        cur = std::move(next);
      };
      expand(horizons, "T", [](Instance& in, double v) {
        if (v < 1 || v != std::floor(v)) throw ConfigError("horizons must be positive integers");
        in.horizon = static_cast<int>(v);
      });
      expand(lambdas, "lam", [](Instance& in, double v) { in.lambda = v; });
      expand(sigmas, "sig", [](Instance& in, double v) {
        NoiseModel nm = in.noise.value_or(NoiseModel{});
        nm.sigma = v;
        in.noise = nm;
      });
      for (auto& s : cur) {
        s.instance.validate();
        cfg.instances.push_back(std::move(s));
      }
    }

    if (!j.contains("algos") || !j.at("algos").is_array() || j.at("algos").empty()) {
      throw ConfigError("config needs a non-empty 'algos' list");
    }
    std::set<std::string> labels;
    for (const auto& a : j.at("algos")) {
      AlgoSpec s;
      if (a.is_string()) {
        s.name = a.get<std::string>();
      } else {
        s.name = a.at("name").get<std::string>();
        if (a.contains("overrides")) s.overrides = a.at("overrides");
        s.label = a.value("label", std::string());
      }
      if (s.label.empty()) s.label = s.name;
      auto it = allowed_overrides().find(s.name);
      if (it == allowed_overrides().end()) throw ConfigError("unknown algo '" + s.name + "'");
      if (!s.overrides.is_object()) throw ConfigError("overrides of '" + s.label + "' must be an object");
      for (const auto& [k, v] : s.overrides.items()) {
        if (!it->second.count(k)) throw ConfigError("algo '" + s.name + "' does not accept override '" + k + "'");
        if (!v.is_number()) throw ConfigError("override '" + k + "' must be a number");
      }
      if (!labels.insert(s.label).second) throw ConfigError("duplicate algo label '" + s.label + "'");
      cfg.algos.push_back(std::move(s));
    }

    if (!j.contains("seeds")) throw ConfigError("config needs 'seeds'");
    const auto& sd = j.at("seeds");
    cfg.base_seed = j.value("base_seed", std::uint64_t{0});
    if (sd.is_array()) {
      for (const auto& x : sd) cfg.seed_indices.push_back(x.get<std::uint64_t>());
    } else if (sd.is_object()) {
      cfg.base_seed = sd.value("base", cfg.base_seed);
      auto count = sd.at("count").get<long long>();
      if (count < 0) throw ConfigError("seed count must be >= 0");
      for (long long k = 0; k < count; ++k) cfg.seed_indices.push_back(static_cast<std::uint64_t>(k));
    } else {
      throw ConfigError("'seeds' must be a list or {base, count}");
    }
    if (cfg.seed_indices.empty()) throw ConfigError("seed list is empty");

    if (j.contains("checkpoints")) {
      for (const auto& x : j.at("checkpoints")) {
        int t = x.get<int>();
        if (t < 1) throw ConfigError("checkpoints must be >= 1");
        cfg.checkpoints.push_back(t);
      }
    }
    cfg.every = j.value("every", 0);
    if (cfg.every < 0) throw ConfigError("'every' must be >= 0");
    cfg.output = j.value("output", std::string("out"));
    if (j.contains("planner")) {
      const auto& p = j.at("planner");
      cfg.planner.exact_cap = p.value("exact_cap", cfg.planner.exact_cap);
      cfg.planner.fptas_epsilon = p.value("epsilon", 0.0);
      if (cfg.planner.exact_cap < 1 || cfg.planner.fptas_epsilon < 0) throw ConfigError("bad planner options");
    }
    return cfg;
  } catch (const ConfigError&) {
    throw;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  } catch (const DomainError& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config " + path + ": " + e.what());
  }
  // a manifest carries its resolved config
  if (j.is_object() && j.contains("config_hash") && j.contains("config")) j = j.at("config");
  return parse_config(j, fs::path(path).parent_path().string().empty() ? "." : fs::path(path).parent_path().string());
}

nlohmann::json resolved_config(const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["name"] = cfg.name;
  j["instances"] = nlohmann::json::array();
  for (const auto& s : cfg.instances) j["instances"].push_back({{"id", s.id}, {"instance", instance_to_json(s.instance)}});
  j["algos"] = nlohmann::json::array();
  for (const auto& a : cfg.algos) j["algos"].push_back({{"name", a.name}, {"label", a.label}, {"overrides", a.overrides}});
  j["base_seed"] = cfg.base_seed;
  j["seeds"] = cfg.seed_indices;
  if (!cfg.checkpoints.empty()) j["checkpoints"] = cfg.checkpoints;
  j["every"] = cfg.every;
  j["output"] = cfg.output;
  j["planner"] = {{"exact_cap", cfg.planner.exact_cap}, {"epsilon", cfg.planner.fptas_epsilon}};
  return j;
}

std::vector<int> checkpoints_for(const ExperimentConfig& cfg, int T) {
  std::set<int> s;
  for (int t : cfg.checkpoints)
    if (t <= T) s.insert(t);
  if (cfg.every > 0)
    for (int t = cfg.every; t <= T; t += cfg.every) s.insert(t);
  if (s.empty()) {
    for (int t : default_checkpoints(T)) s.insert(t);
  }
  s.insert(T);
  return {s.begin(), s.end()};
}

// ---------------------------------------------------------------- presets

std::vector<std::string> preset_names() {
  return {"fig2_repro", "lambda_sweep", "sticky_demo", "noise_robustness",
          "unknown_lambda_demo", "etc_midrange", "lambda0_sanity"};
}

nlohmann::json preset_config(const std::string& name) {
  using nlohmann::json;
  auto arms = [](std::initializer_list<std::pair<double, double>> l) {
    json a = json::array();
    for (auto [r, b] : l) a.push_back({{"r", r}, {"b", b}});
    return a;
  };
  if (name == "fig2_repro") {
    return {{"name", name},
            {"instance", {{"generator", "proposition1"}, {"eps", 0.1}, {"horizon", 20000}}},
            {"instance_id", "prop1"},
            {"lambdas", {0.25, 0.5, 0.75, 1.0}},
            {"algos", {"ucb1", "exp3", "aae", "batched_sticky"}},
            {"seeds", {{"base", 2024}, {"count", 20}}},
            {"every", 500},
            {"output", "out/fig2_repro"}};
  }
  if (name == "lambda_sweep") {
    return {{"name", name},
            {"instance", {{"lambda", 0.5}, {"horizon", 20000}, {"q0", 1.0},
                          {"arms", arms({{0.6, 1.0}, {0.9, 0.4}, {0.3, 0.9}})}}},
            {"instance_id", "three_arms"},
            {"lambdas", {0.1, 0.3, 0.5, 0.7, 0.9}},
            {"algos", json::array({json{{"name", "etc_known"}, {"overrides", {{"i_R", 0}}}}, "etc_unknown", "exp3p", "ucb1"})},
            {"seeds", {{"base", 7}, {"count", 10}}},
            {"every", 500},
            {"output", "out/lambda_sweep"}};
  }
  if (name == "sticky_demo") {
    return {{"name", name},
            {"instance", {{"lambda", 1.0}, {"horizon", 20000}, {"q0", 1.0},
                          {"arms", arms({{0.9, 0.2}, {0.3, 0.95}, {0.6, 0.6}})}}},
            {"instance_id", "sticky3"},
            {"horizons", {5000, 10000, 20000, 40000}},
            {"algos", {"batched_sticky", "ucb1", "exp3"}},
            {"seeds", {{"base", 11}, {"count", 10}}},
            {"every", 1000},
            {"output", "out/sticky_demo"}};
  }
  if (name == "noise_robustness") {
    return {{"name", name},
            {"instance", {{"lambda", 0.5}, {"horizon", 20000}, {"q0", 1.0},
                          {"arms", arms({{0.9, 1.0}, {0.4, 0.2}})},
                          {"noise", {{"sigma", 0.0}, {"kind", "gaussian"}, {"clip", true}}}}},
            {"instance_id", "etc2"},
            {"sigmas", {0.0, 0.05, 0.1}},
            {"algos", json::array({json{{"name", "etc_known"}, {"overrides", {{"i_R", 0}}}}, "exp3p", "ucb1", "batched_sticky"})},
            {"seeds", {{"base", 13}, {"count", 10}}},
            {"every", 500},
            {"output", "out/noise_robustness"}};
  }
  if (name == "unknown_lambda_demo") {
    return {{"name", name},
            {"instance", {{"lambda", 0.5}, {"horizon", 200000}, {"q0", 1.0},
                          {"arms", arms({{1.0, 0.2}, {1.0, 0.8}})}}},
            {"instance_id", "two_states"},
            {"lambdas", {0.0, 0.5, 1.0}},
            {"algos", {"unknown_lambda", "exp3p"}},
            {"seeds", {{"base", 17}, {"count", 5}}},
            {"every", 5000},
            {"output", "out/unknown_lambda_demo"}};
  }
  if (name == "etc_midrange") {
    return {{"name", name},
            {"instance", {{"lambda", 0.5}, {"horizon", 100000}, {"q0", 1.0},
                          {"arms", arms({{0.9, 1.0}, {0.4, 0.2}})}}},
            {"instance_id", "etc2"},
            {"algos", json::array({json{{"name", "etc_known"}, {"overrides", {{"i_R", 0}}}}, "etc_unknown", "exp3p", "ucb1"})},
            {"seeds", {{"base", 19}, {"count", 10}}},
            {"every", 2000},
            {"output", "out/etc_midrange"}};
  }
  if (name == "lambda0_sanity") {
    return {{"name", name},
            {"instance", {{"lambda", 0.0}, {"horizon", 20000}, {"q0", 1.0},
                          {"arms", arms({{0.9, 0.5}, {0.6, 0.5}})}}},
            {"instance_id", "static2"},
            {"algos", {"ucb1"}},
            {"seeds", {{"base", 23}, {"count", 10}}},
            {"every", 1000},
            {"output", "out/lambda0_sanity"}};
  }
  throw ConfigError("unknown preset '" + name + "'");
}

// ---------------------------------------------------------------- runner

namespace {

struct JobResult {
  std::string rows;
  std::vector<std::string> flags;
  std::vector<double> des_at;
  std::vector<double> ext_at;
  double seconds = 0.0;
  std::uint64_t seed = 0;
  std::string error;
};

}  // namespace

RunOutputs run_experiment(const ExperimentConfig& cfg, int jobs) {
  std::error_code ec;
  fs::create_directories(cfg.output, ec);
  if (ec || !fs::is_directory(cfg.output)) throw Error("cannot create output directory " + cfg.output);

  using clock = std::chrono::steady_clock;
  const std::size_t NI = cfg.instances.size(), NA = cfg.algos.size(), NS = cfg.seed_indices.size();

  std::vector<Plan> plans(NI);
  std::vector<double> plan_seconds(NI);
  std::vector<std::vector<int>> cps(NI);
  for (std::size_t i = 0; i < NI; ++i) {
    auto t0 = clock::now();
    plans[i] = benchmark_opt(cfg.instances[i].instance, cfg.planner);
    plan_seconds[i] = std::chrono::duration<double>(clock::now() - t0).count();
    cps[i] = checkpoints_for(cfg, cfg.instances[i].instance.horizon);
  }

  const std::size_t total = NI * NA * NS;
  std::vector<JobResult> results(total);
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      std::size_t k = next.fetch_add(1);
      if (k >= total) return;
      const std::size_t ii = k / (NA * NS), ai = (k / NS) % NA, si = k % NS;
      const auto& spec = cfg.instances[ii];
      const auto& algo = cfg.algos[ai];
      JobResult& res = results[k];
      auto t0 = clock::now();
      try {
        res.seed = replication_seed(cfg.base_seed, spec.id, algo.label, cfg.seed_indices[si]);
        Trajectory traj = run_learner(algo, spec.instance, res.seed, &plans[ii]);
        RegretCurve curve = regret_curve(traj, plans[ii], spec.instance);
        std::string rows;
        for (int t : cps[ii]) {
          double d = curve.des[static_cast<std::size_t>(t - 1)], e = curve.ext[static_cast<std::size_t>(t - 1)];
          res.des_at.push_back(d);
          res.ext_at.push_back(e);
          rows += spec.id + "," + algo.label + "," + std::to_string(res.seed) + "," + std::to_string(t) + "," +
                  fmt(d) + "," + fmt(e) + "\n";
        }
        res.rows = std::move(rows);
        res.flags = traj.flags;
      } catch (const std::exception& e) {
        res.error = e.what();
      }
      res.seconds = std::chrono::duration<double>(clock::now() - t0).count();
    }
  };
  jobs = std::max(1, std::min<int>(jobs, static_cast<int>(std::max<std::size_t>(total, 1))));
  std::vector<std::thread> pool;
  for (int w = 1; w < jobs; ++w) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  for (std::size_t k = 0; k < total; ++k) {
    if (!results[k].error.empty()) {
      const std::size_t ii = k / (NA * NS), ai = (k / NS) % NA;
      throw Error("replication failed (" + cfg.instances[ii].id + ", " + cfg.algos[ai].label + "): " + results[k].error);
    }
  }

  RunOutputs out;
  const fs::path dir(cfg.output);
  {
    std::ofstream f(dir / "regret.csv", std::ios::binary);
    f << "instance_id,algo,seed,t,des_regret,external_regret\n";
    for (const auto& r : results) f << r.rows;
    out.files.push_back((dir / "regret.csv").string());
  }
  {
    std::ofstream f(dir / "summary.csv", std::ios::binary);
    f << "instance_id,algo,t,des_mean,des_std,des_min,des_max,ext_mean,ext_std,ext_min,ext_max\n";
    for (std::size_t ii = 0; ii < NI; ++ii) {
      for (std::size_t ai = 0; ai < NA; ++ai) {
        std::vector<RegretCurve> curves;
        for (std::size_t si = 0; si < NS; ++si) {
          const auto& r = results[(ii * NA + ai) * NS + si];
          RegretCurve c;
          c.des = r.des_at;
          c.ext = r.ext_at;
          curves.push_back(std::move(c));
        }
        std::vector<int> idx(cps[ii].size());
        for (std::size_t m = 0; m < idx.size(); ++m) idx[m] = static_cast<int>(m + 1);
        RunSummary s = aggregate(curves, idx);
        for (std::size_t m = 0; m < idx.size(); ++m) {
          f << cfg.instances[ii].id << "," << cfg.algos[ai].label << "," << cps[ii][m] << "," << fmt(s.des[m].mean)
            << "," << fmt(s.des[m].std) << "," << fmt(s.des[m].min) << "," << fmt(s.des[m].max) << ","
            << fmt(s.ext[m].mean) << "," << fmt(s.ext[m].std) << "," << fmt(s.ext[m].min) << ","
            << fmt(s.ext[m].max) << "\n";
        }
      }
    }
    out.files.push_back((dir / "summary.csv").string());
  }
  {
    std::ofstream f(dir / "flags.csv", std::ios::binary);
    f << "instance_id,algo,seed,flag\n";
    for (std::size_t k = 0; k < total; ++k) {
      const std::size_t ii = k / (NA * NS), ai = (k / NS) % NA;
      for (const auto& fl : results[k].flags) {
        f << cfg.instances[ii].id << "," << cfg.algos[ai].label << "," << results[k].seed << "," << fl << "\n";
        out.any_flag = true;
      }
    }
    out.files.push_back((dir / "flags.csv").string());
  }
  {
    nlohmann::json m;
    nlohmann::json rc = resolved_config(cfg);
    m["version"] = kVersion;
    nlohmann::json hashed = rc;
    hashed.erase("output");  // where results land does not change them
    m["config_hash"] = config_hash(hashed);
    m["config"] = rc;
    m["benchmarks"] = nlohmann::json::array();
    for (std::size_t ii = 0; ii < NI; ++ii) {
      m["benchmarks"].push_back({{"instance_id", cfg.instances[ii].id}, {"opt", plans[ii].expected_total}});
    }
    m["outputs"] = {"regret.csv", "summary.csv", "flags.csv"};
    nlohmann::json timing;
    timing["benchmark_seconds"] = plan_seconds;
    std::vector<double> secs;
    for (const auto& r : results) secs.push_back(r.seconds);
    timing["replication_seconds"] = secs;
    m["wall_times"] = timing;
    std::ofstream f(dir / "manifest.json", std::ios::binary);
    f << m.dump(2) << "\n";
    out.files.push_back((dir / "manifest.json").string());
  }
  return out;
}

}  // namespace bdes
