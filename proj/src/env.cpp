#include "bdes/env.hpp"

#include <algorithm>
#include <cmath>

#include "bdes/errors.hpp"

namespace bdes {

namespace {

void check_unit(double x, const char* what) {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError(std::string(what) + " must be in [0,1]");
}

}  // namespace

double state_update(double q, double b, double lambda) {
  check_unit(q, "state");
  check_unit(b, "end state");
  check_unit(lambda, "lambda");
  double next = (1.0 - lambda) * q + lambda * b;
  // convex combination, only round-off can leave the interval
  return std::clamp(next, 0.0, 1.0);
}

double closed_form_state(double lambda, double q0, std::span<const double> end_states) {
  check_unit(lambda, "lambda");
  check_unit(q0, "q0");
  const std::size_t t = end_states.size();
  const double keep = 1.0 - lambda;
  double q = std::pow(keep, static_cast<double>(t)) * q0;
  double sum = 0.0;
  for (std::size_t s = 0; s < t; ++s) {
    check_unit(end_states[s], "end state");
    sum += std::pow(keep, static_cast<double>(t - 1 - s)) * end_states[s];
  }
  return q + lambda * sum;
}

double expected_reward(double r, double q) { return r * q; }

double noisy_effective_state(double q, const NoiseModel& noise, Rng& rng) {
  check_unit(q, "state");
  if (noise.sigma == 0.0) return q;
  double nu = 0.0;
  if (noise.kind == NoiseKind::gaussian) {
    nu = noise.sigma * rng.normal();
  } else {
    nu = noise.sigma * std::sqrt(3.0) * (2.0 * rng.uniform() - 1.0);
  }
  double v = q + nu;
  return noise.clip ? std::clamp(v, 0.0, 1.0) : v;
}

StateTrace initial_trace(const Instance& inst) {
  StateTrace tr;
  tr.q = inst.q0;
  return tr;
}

int pull(StateTrace& trace, const Instance& inst, std::size_t arm, Rng& rng) {
  if (arm >= inst.num_arms()) throw DomainError("pull: arm index out of range");
  if (trace.t >= inst.horizon) throw HorizonExhausted("pull: horizon exhausted");
  const ArmSpec& a = inst.arms[arm];
  double q_eff = inst.noise ? noisy_effective_state(trace.q, *inst.noise, rng) : trace.q;
  int reward = rng.bernoulli(a.r * q_eff) ? 1 : 0;
  trace.q = state_update(trace.q, a.b, inst.lambda);
  trace.history.push_back(arm);
  ++trace.t;
  return reward;
}

std::vector<double> sequence_states(const std::vector<ArmSpec>& arms, double lambda, double q0,
                                    const std::vector<std::size_t>& seq) {
  std::vector<double> qs;
  qs.reserve(seq.size());
  double q = q0;
  for (std::size_t a : seq) {
    if (a >= arms.size()) throw DomainError("sequence: arm index out of range");
    qs.push_back(q);
    q = (1.0 - lambda) * q + lambda * arms[a].b;
  }
  return qs;
}

double sequence_value(const std::vector<ArmSpec>& arms, double lambda, double q0,
                      const std::vector<std::size_t>& seq) {
  auto qs = sequence_states(arms, lambda, q0, seq);
  double total = 0.0;
  for (std::size_t t = 0; t < seq.size(); ++t) total += arms[seq[t]].r * qs[t];
  return total;
}

bool Trajectory::has_flag(const std::string& f) const {
  return std::find(flags.begin(), flags.end(), f) != flags.end();
}

Env::Env(const Instance& inst, Rng& rng) : inst_(inst), rng_(rng), trace_(initial_trace(inst)) {
  inst_.validate();
  auto n = static_cast<std::size_t>(inst.horizon);
  traj_.arms.reserve(n);
  traj_.realized.reserve(n);
  traj_.expected.reserve(n);
  traj_.states.reserve(n);
}

int Env::pull(std::size_t arm) {
  double q = trace_.q;
  int g = bdes::pull(trace_, inst_, arm, rng_);
  traj_.arms.push_back(arm);
  traj_.realized.push_back(g);
  traj_.expected.push_back(expected_reward(inst_.arms[arm].r, q));
  traj_.states.push_back(q);
  return g;
}

void Env::flag(const std::string& f) {
  if (!traj_.has_flag(f)) traj_.flags.push_back(f);
}

}  // namespace bdes
