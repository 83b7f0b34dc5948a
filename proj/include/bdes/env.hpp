#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "bdes/instance.hpp"
#include "bdes/rng.hpp"

namespace bdes {

// q' = (1 - lambda) q + lambda b
double state_update(double q, double b, double lambda);

// State after pulling arms with the given end states, starting from q0.
double closed_form_state(double lambda, double q0, std::span<const double> end_states);

double expected_reward(double r, double q);

// Sampling state q + nu, clipped to [0,1] when noise.clip. Draws nothing when sigma == 0.
double noisy_effective_state(double q, const NoiseModel& noise, Rng& rng);

struct StateTrace {
  int t = 0;
  double q = 1.0;
  std::vector<std::size_t> history;
};

StateTrace initial_trace(const Instance& inst);

// One Bernoulli pull; advances the trace. Returns the 0/1 reward.
int pull(StateTrace& trace, const Instance& inst, std::size_t arm, Rng& rng);

// Noiseless states q_1..q_T seen by each round of the sequence (q_1 = q0).
std::vector<double> sequence_states(const std::vector<ArmSpec>& arms, double lambda, double q0,
                                    const std::vector<std::size_t>& seq);
double sequence_value(const std::vector<ArmSpec>& arms, double lambda, double q0,
                      const std::vector<std::size_t>& seq);

struct Trajectory {
  std::vector<std::size_t> arms;
  std::vector<int> realized;
  std::vector<double> expected;  // r * q with the noiseless state
  std::vector<double> states;    // noiseless q at the time of each pull
  std::vector<std::string> flags;

  std::size_t size() const { return arms.size(); }
  bool has_flag(const std::string& f) const;
};

// What a learner sees: K, T, lambda and a pull button. Parameters stay hidden.
class Env {
 public:
  Env(const Instance& inst, Rng& rng);

  std::size_t num_arms() const { return inst_.num_arms(); }
  int horizon() const { return inst_.horizon; }
  double lambda() const { return inst_.lambda; }
  int round() const { return trace_.t; }
  int remaining() const { return inst_.horizon - trace_.t; }
  bool done() const { return remaining() <= 0; }

  int pull(std::size_t arm);
  void flag(const std::string& f);

  const Trajectory& trajectory() const { return traj_; }
  Trajectory take_trajectory() { return std::move(traj_); }

  // Ground truth, for tests and diagnostics only.
  double true_state() const { return trace_.q; }

 private:
  const Instance& inst_;
  Rng& rng_;
  StateTrace trace_;
  Trajectory traj_;
};

}  // namespace bdes
