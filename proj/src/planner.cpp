#include "bdes/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "bdes/env.hpp"
#include "bdes/errors.hpp"

namespace bdes {

namespace {

void check_arms(const std::vector<ArmSpec>& arms, double lambda, int T, double q0) {
  if (arms.empty()) throw DomainError("planner: need at least one arm");
  if (T < 1) throw DomainError("planner: horizon must be >= 1");
  auto unit = [](double x) { return x >= 0.0 && x <= 1.0; };
  if (!unit(lambda) || !unit(q0)) throw DomainError("planner: lambda and q0 must be in [0,1]");
  for (const auto& a : arms) {
    if (!unit(a.r) || !unit(a.b)) throw DomainError("planner: arm parameters must be in [0,1]");
  }
}

bool within_cap(std::size_t K, int T, double cap) {
  return static_cast<double>(T) * std::log(static_cast<double>(K)) <= std::log(cap) + 1e-12;
}

}  // namespace

Plan plan_from_sequence(const std::vector<ArmSpec>& arms, double lambda, double q0,
                        std::vector<std::size_t> seq) {
  Plan p;
  p.states = sequence_states(arms, lambda, q0, seq);
  p.rewards.resize(seq.size());
  double total = 0.0;
  for (std::size_t t = 0; t < seq.size(); ++t) {
    p.rewards[t] = arms[seq[t]].r * p.states[t];
    total += p.rewards[t];
  }
  p.expected_total = total;
  p.sequence = std::move(seq);
  return p;
}

nlohmann::json plan_to_json(const Plan& p) {
  return {{"sequence", p.sequence}, {"expected_total", p.expected_total}};
}

Frontier dominance_prune(Frontier f) {
  std::stable_sort(f.begin(), f.end(), [](const ValueStatePair& x, const ValueStatePair& y) {
    if (x.rho != y.rho) return x.rho > y.rho;
    return x.q > y.q;
  });
  Frontier out;
  double best_q = -std::numeric_limits<double>::infinity();
  for (const auto& p : f) {
    if (p.q > best_q) {
      out.push_back(p);
      best_q = p.q;
    }
  }
  return out;
}

Frontier grid_prune(Frontier f) {
  std::stable_sort(f.begin(), f.end(), [](const ValueStatePair& x, const ValueStatePair& y) {
    if (x.grid != y.grid) return x.grid > y.grid;
    if (x.q != y.q) return x.q > y.q;
    return x.rho > y.rho;
  });
  Frontier out;
  double best_q = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < f.size(); ++k) {
    if (k > 0 && f[k].grid == f[k - 1].grid) continue;  // not the max-q pair of its level
    if (f[k].q > best_q) {
      out.push_back(f[k]);
      best_q = f[k].q;
    }
  }
  return out;
}

Plan exact_dp(const Instance& inst, double cap) {
  inst.validate();
  const std::size_t K = inst.num_arms();
  const int T = inst.horizon;
  if (!within_cap(K, T, cap)) {
    throw CapExceeded("exact_dp: K^T exceeds the cap of " + std::to_string(cap) + " sequences");
  }
  const double lam = inst.lambda;
  std::vector<std::size_t> cur(static_cast<std::size_t>(T)), best;
  double best_v = -std::numeric_limits<double>::infinity();

  // lexicographic DFS; a later sequence must win by more than 1e-12
  auto dfs = [&](auto&& self, int t, double q, double acc) -> void {
    if (t == T) {
      if (acc > best_v + 1e-12) {
        best_v = acc;
        best = cur;
      }
      return;
    }
    for (std::size_t i = 0; i < K; ++i) {
      cur[static_cast<std::size_t>(t)] = i;
      const ArmSpec& a = inst.arms[i];
      self(self, t + 1, (1.0 - lam) * q + lam * a.b, acc + a.r * q);
    }
  };
  dfs(dfs, 0, inst.q0, 0.0);
  return plan_from_sequence(inst.arms, lam, inst.q0, std::move(best));
}

Plan fptas_dp(const std::vector<ArmSpec>& est, double lambda, int T, double epsilon, double q0,
              FptasStats* stats) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw DomainError("fptas_dp: epsilon must be > 0");
  check_arms(est, lambda, T, q0);
  const std::size_t K = est.size();

  std::vector<Frontier> layers;
  layers.push_back({ValueStatePair{0.0, q0, 0, -1, 0}});
  if (stats) stats->frontier_sizes.clear();

  for (int t = 1; t <= T; ++t) {
    const Frontier& prev = layers.back();
    Frontier cand;
    cand.reserve(prev.size() * K);
    for (std::size_t p = 0; p < prev.size(); ++p) {
      for (std::size_t i = 0; i < K; ++i) {
        ValueStatePair v;
        v.rho = prev[p].rho + est[i].r * prev[p].q;
        v.q = (1.0 - lambda) * prev[p].q + lambda * est[i].b;
        v.parent = static_cast<int>(p);
        v.arm = i;
        cand.push_back(v);
      }
    }
    if (t == T) {
      std::size_t best = 0;
      for (std::size_t k = 1; k < cand.size(); ++k) {
        if (cand[k].rho > cand[best].rho) best = k;
      }
      std::vector<std::size_t> seq(static_cast<std::size_t>(T));
      seq[static_cast<std::size_t>(T - 1)] = cand[best].arm;
      int parent = cand[best].parent;
      for (int s = T - 1; s >= 1; --s) {
        const ValueStatePair& node = layers[static_cast<std::size_t>(s)][static_cast<std::size_t>(parent)];
        seq[static_cast<std::size_t>(s - 1)] = node.arm;
        parent = node.parent;
      }
      return plan_from_sequence(est, lambda, q0, std::move(seq));
    }
    double rmax = 0.0;
    for (const auto& v : cand) rmax = std::max(rmax, v.rho);
    const double unit = rmax > 0.0 ? epsilon * rmax / t : 1.0;
    for (auto& v : cand) v.grid = static_cast<std::int64_t>(std::floor(v.rho / unit));
    layers.push_back(grid_prune(std::move(cand)));
    if (stats) stats->frontier_sizes.push_back(layers.back().size());
  }
  throw std::logic_error("fptas_dp: unreachable");
}

namespace {

struct Line {
  double a;
  double c;
  std::size_t arm;
  double at(double x) const { return a * x + c; }
};

// Upper envelope of lines over [0,1]; a line is dropped when it never beats the others by more than tol.
std::vector<Line> upper_envelope(std::vector<Line> lines, double tol) {
  std::sort(lines.begin(), lines.end(), [](const Line& x, const Line& y) {
    if (x.a != y.a) return x.a < y.a;
    if (x.c != y.c) return x.c > y.c;
    return x.arm < y.arm;
  });
  std::vector<Line> h;
  for (std::size_t k = 0; k < lines.size(); ++k) {
    const Line& l = lines[k];
    if (k > 0 && lines[k - 1].a == l.a) continue;
    while (!h.empty()) {
      if (h.size() == 1) {
        if (h[0].at(0.0) <= l.at(0.0) + tol) {
          h.pop_back();
          continue;
        }
        break;
      }
      const Line& l1 = h[h.size() - 2];
      const Line& l2 = h.back();
      double x = (l1.c - l.c) / (l.a - l1.a);
      x = std::clamp(x, 0.0, 1.0);
      if (l2.at(x) <= std::max(l1.at(x), l.at(x)) + tol) {
        h.pop_back();
        continue;
      }
      break;
    }
    h.push_back(l);
  }
  while (h.size() > 1 && h.back().at(1.0) <= h[h.size() - 2].at(1.0) + tol) h.pop_back();
  return h;
}

}  // namespace

Plan envelope_dp(const std::vector<ArmSpec>& arms, double lambda, int T, double q0,
                 EnvelopeStats* stats) {
  check_arms(arms, lambda, T, q0);
  const std::size_t K = arms.size();
  // policy[k]: (left end, arm) intervals of [0,1] when k rounds remain
  std::vector<std::vector<std::pair<double, std::size_t>>> policy(static_cast<std::size_t>(T) + 1);
  std::vector<Line> V{{0.0, 0.0, 0}};
  std::vector<Line> cand;
  std::size_t max_lines = 1;
  for (int k = 1; k <= T; ++k) {
    cand.clear();
    cand.reserve(V.size() * K);
    for (std::size_t i = 0; i < K; ++i) {
      for (const Line& l : V) {
        cand.push_back({arms[i].r + (1.0 - lambda) * l.a, l.c + lambda * arms[i].b * l.a, i});
      }
    }
    V = upper_envelope(std::move(cand), 1e-12 * k);
    cand = {};
    max_lines = std::max(max_lines, V.size());
    auto& pol = policy[static_cast<std::size_t>(k)];
    for (std::size_t m = 0; m < V.size(); ++m) {
      double start = 0.0;
      if (m > 0) start = std::clamp((V[m - 1].c - V[m].c) / (V[m].a - V[m - 1].a), 0.0, 1.0);
      if (!pol.empty() && pol.back().second == V[m].arm) continue;
      pol.emplace_back(start, V[m].arm);
    }
  }
  if (stats) stats->max_lines = max_lines;

  std::vector<std::size_t> seq;
  seq.reserve(static_cast<std::size_t>(T));
  double q = q0;
  for (int t = 0; t < T; ++t) {
    const auto& pol = policy[static_cast<std::size_t>(T - t)];
    std::size_t arm = pol.front().second;
    for (const auto& [start, a] : pol) {
      if (start <= q) arm = a;
      else break;
    }
    seq.push_back(arm);
    q = (1.0 - lambda) * q + lambda * arms[arm].b;
  }
  return plan_from_sequence(arms, lambda, q0, std::move(seq));
}

TwoCycle best_two_cycle(const std::vector<ArmSpec>& arms) {
  if (arms.empty()) throw DomainError("best_two_cycle: need at least one arm");
  TwoCycle best{0, 0, -1.0};
  for (std::size_t i = 0; i < arms.size(); ++i) {
    for (std::size_t j = i; j < arms.size(); ++j) {
      double v = arms[i].r * arms[j].b + arms[j].r * arms[i].b;
      if (v > best.value) best = {i, j, v};
    }
  }
  return best;
}

Plan benchmark_opt(const Instance& inst, const PlannerOptions& opts) {
  inst.validate();
  Plan p;
  if (within_cap(inst.num_arms(), inst.horizon, opts.exact_cap)) {
    p = exact_dp(inst, opts.exact_cap);
  } else if (opts.fptas_epsilon > 0.0) {
    p = fptas_dp(inst.arms, inst.lambda, inst.horizon, opts.fptas_epsilon, inst.q0);
  } else {
    p = envelope_dp(inst.arms, inst.lambda, inst.horizon, inst.q0);
  }
  if (inst.lambda == 1.0 && inst.q0 == 1.0 && opts.fptas_epsilon == 0.0) {
    // sticky regime: some alternation already earns floor(T/2) cycles
    double floor_value = std::floor(inst.horizon / 2.0) * best_two_cycle(inst.arms).value;
    if (p.expected_total < floor_value - 1e-9 * inst.horizon) {
      throw std::logic_error("benchmark_opt: plan below the two-cycle value");
    }
  }
  return p;
}

ApproxCheck approx_input_guarantee_check(const std::vector<ArmSpec>& truth,
                                         const std::vector<ArmSpec>& est, double lambda, int T,
                                         double delta, double q0, double epsilon) {
  if (truth.size() != est.size()) throw PreconditionError("approx check: arm count mismatch");
  for (std::size_t i = 0; i < truth.size(); ++i) {
    double dev = std::max(std::abs(truth[i].r - est[i].r), std::abs(truth[i].b - est[i].b));
    if (dev > delta + 1e-12) {
      throw PreconditionError("approx check: estimate " + std::to_string(i) + " is more than delta away");
    }
  }
  Plan from_est = fptas_dp(est, lambda, T, epsilon, q0);
  Instance inst;
  inst.arms = truth;
  inst.lambda = lambda;
  inst.horizon = T;
  inst.q0 = q0;
  Plan opt = benchmark_opt(inst);
  ApproxCheck out;
  out.value = sequence_value(truth, lambda, q0, from_est.sequence);
  out.opt = opt.expected_total;
  out.ok = out.value >= out.opt - delta * T - 1e-12;
  return out;
}

}  // namespace bdes
