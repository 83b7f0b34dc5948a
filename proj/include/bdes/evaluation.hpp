#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bdes/env.hpp"
#include "bdes/instance.hpp"
#include "bdes/planner.hpp"

namespace bdes {

struct RegretCurve {
  std::vector<double> des;
  std::vector<double> ext;
  std::uint64_t seed = 0;
  std::string instance_id;
  std::string algo;
};

// Benchmark prefix minus trajectory prefix, both in expected rewards.
std::vector<double> des_regret(const Trajectory& traj, const Plan& benchmark);

// Best fixed arm against the algorithm's own states.
std::vector<double> external_regret(const Trajectory& traj, const Instance& inst);

RegretCurve regret_curve(const Trajectory& traj, const Plan& benchmark, const Instance& inst);

struct PointStats {
  int t = 0;  // 1-based round
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation, 0 for one curve
  double min = 0.0;
  double max = 0.0;
};

struct RunSummary {
  std::vector<PointStats> des;
  std::vector<PointStats> ext;
};

std::vector<int> default_checkpoints(int T);

RunSummary aggregate(const std::vector<RegretCurve>& curves, std::vector<int> checkpoints = {});

}  // namespace bdes
