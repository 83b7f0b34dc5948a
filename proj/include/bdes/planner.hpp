#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <json.hpp>

#include "bdes/instance.hpp"

namespace bdes {

struct Plan {
  std::vector<std::size_t> sequence;
  double expected_total = 0.0;
  std::vector<double> states;
  std::vector<double> rewards;  // r * q per round
};

// Recomputes value and states of a fixed sequence.
Plan plan_from_sequence(const std::vector<ArmSpec>& arms, double lambda, double q0,
                        std::vector<std::size_t> seq);

nlohmann::json plan_to_json(const Plan& p);

struct ValueStatePair {
  double rho = 0.0;
  double q = 0.0;
  std::int64_t grid = 0;  // floor(rho / unit) in fptas mode
  int parent = -1;
  std::size_t arm = 0;
};
using Frontier = std::vector<ValueStatePair>;

// Exact Pareto filter on (rho, q); output sorted by rho descending.
Frontier dominance_prune(Frontier f);
// Grid mode: one pair per grid level (max q), and only levels whose q beats all higher levels.
Frontier grid_prune(Frontier f);

inline constexpr double kDefaultExactCap = 2e6;

// Exhaustive search; ties go to the lexicographically smallest sequence.
Plan exact_dp(const Instance& inst, double cap = kDefaultExactCap);

struct FptasStats {
  std::vector<std::size_t> frontier_sizes;  // after pruning, per round 1..T-1
};

Plan fptas_dp(const std::vector<ArmSpec>& est, double lambda, int T, double epsilon,
              double q0 = 1.0, FptasStats* stats = nullptr);

struct EnvelopeStats {
  std::size_t max_lines = 0;
};

// Backward DP over V_k(q) = max_i r_i q + V_{k-1}((1-lambda) q + lambda b_i).
Plan envelope_dp(const std::vector<ArmSpec>& arms, double lambda, int T, double q0 = 1.0,
                 EnvelopeStats* stats = nullptr);

struct TwoCycle {
  std::size_t i = 0;
  std::size_t j = 0;
  double value = 0.0;  // r_i b_j + r_j b_i, one full cycle (two rounds)
};

TwoCycle best_two_cycle(const std::vector<ArmSpec>& arms);

struct PlannerOptions {
  double exact_cap = kDefaultExactCap;
  double fptas_epsilon = 0.0;  // > 0 selects fptas instead of the envelope DP above the cap
};

Plan benchmark_opt(const Instance& inst, const PlannerOptions& opts = {});

struct ApproxCheck {
  bool ok = false;
  double value = 0.0;  // plan from estimates, evaluated on true arms
  double opt = 0.0;
};

// Throws PreconditionError if some estimate is more than delta away from the truth.
ApproxCheck approx_input_guarantee_check(const std::vector<ArmSpec>& truth,
                                         const std::vector<ArmSpec>& est, double lambda, int T,
                                         double delta, double q0 = 1.0, double epsilon = 1e-6);

}  // namespace bdes
