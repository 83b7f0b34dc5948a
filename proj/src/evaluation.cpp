#include "bdes/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bdes/errors.hpp"

namespace bdes {

std::vector<double> des_regret(const Trajectory& traj, const Plan& benchmark) {
  if (traj.expected.size() != benchmark.rewards.size()) {
    throw DomainError("des_regret: horizon mismatch between trajectory and benchmark");
  }
  std::vector<double> out(traj.expected.size());
  double bench = 0.0, alg = 0.0;
  for (std::size_t t = 0; t < out.size(); ++t) {
    bench += benchmark.rewards[t];
    alg += traj.expected[t];
    out[t] = bench - alg;
  }
  return out;
}

std::vector<double> external_regret(const Trajectory& traj, const Instance& inst) {
  if (traj.states.size() != traj.expected.size()) {
    throw DomainError("external_regret: trajectory without states");
  }
  double r_max = 0.0;
  for (const auto& a : inst.arms) r_max = std::max(r_max, a.r);
  // every fixed arm faces the same states, so the best one is the largest r
  std::vector<double> out(traj.expected.size());
  double q_sum = 0.0, alg = 0.0;
  for (std::size_t t = 0; t < out.size(); ++t) {
    q_sum += traj.states[t];
    alg += traj.expected[t];
    out[t] = r_max * q_sum - alg;
  }
  return out;
}

RegretCurve regret_curve(const Trajectory& traj, const Plan& benchmark, const Instance& inst) {
  RegretCurve c;
  c.des = des_regret(traj, benchmark);
  c.ext = external_regret(traj, inst);
  return c;
}

std::vector<int> default_checkpoints(int T) {
  std::vector<int> cp;
  for (long long p = 1; p < T; p *= 2) cp.push_back(static_cast<int>(p));
  if (T >= 1) cp.push_back(T);
  return cp;
}

namespace {

std::vector<PointStats> stats_at(const std::vector<RegretCurve>& curves, const std::vector<int>& cps,
                                 bool des) {
  std::vector<PointStats> out;
  for (int t : cps) {
    PointStats ps;
    ps.t = t;
    // Welford
    double mean = 0.0, m2 = 0.0;
    ps.min = std::numeric_limits<double>::infinity();
    ps.max = -std::numeric_limits<double>::infinity();
    long n = 0;
    for (const auto& c : curves) {
      double x = (des ? c.des : c.ext)[static_cast<std::size_t>(t - 1)];
      ++n;
      double d = x - mean;
      mean += d / n;
      m2 += d * (x - mean);
      ps.min = std::min(ps.min, x);
      ps.max = std::max(ps.max, x);
    }
    ps.mean = mean;
    ps.std = n > 1 ? std::sqrt(m2 / (n - 1)) : 0.0;
    out.push_back(ps);
  }
  return out;
}

}  // namespace

RunSummary aggregate(const std::vector<RegretCurve>& curves, std::vector<int> checkpoints) {
  if (curves.empty()) throw DomainError("aggregate: no curves");
  const std::size_t T = curves.front().des.size();
  for (const auto& c : curves) {
    if (c.des.size() != T || c.ext.size() != T) throw DomainError("aggregate: horizons differ");
  }
  if (checkpoints.empty()) checkpoints = default_checkpoints(static_cast<int>(T));
  for (int t : checkpoints) {
    if (t < 1 || static_cast<std::size_t>(t) > T) throw DomainError("aggregate: checkpoint outside the horizon");
  }
  RunSummary s;
  s.des = stats_at(curves, checkpoints, true);
  s.ext = stats_at(curves, checkpoints, false);
  return s;
}

}  // namespace bdes
