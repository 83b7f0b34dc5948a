#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bdes/env.hpp"
#include "bdes/rng.hpp"

namespace bdes {

// ---- explore-then-commit ----

struct EtcParams {
  double epsilon = 0.0;
  double delta = 0.0;
  int M = 0;
  int N = 1;    // N(lambda)
  int N_R = 1;  // replenish length
};

// Pulls needed to bring the state within eps of an end state: ceil(ln(1/(lambda eps)) / ln(1/(1-lambda))), at least 1.
int n_lambda(double lambda, double eps);

EtcParams tune_etc(int K, int T, double lambda);
// Same tunings with epsilon forced.
EtcParams etc_params_for(double epsilon, int T, double lambda);

// 2 K M (N + 1) + N_R
long long etc_budget(int K, const EtcParams& p);

struct EtcOptions {
  std::optional<double> epsilon;
  std::optional<int> M;
  std::optional<std::size_t> i_R;
  std::optional<double> lambda;  // planning/tuning lambda; defaults to the env's
  double dp_epsilon = 0.0;       // 0: exact envelope DP for the commit plan
};

struct EtcDiagnostics {
  EtcParams params;
  std::vector<double> r_hat;
  std::vector<double> v_hat;
  std::vector<double> b_hat;
  double scale = 1.0;  // unknown-i_R rescaling m = max b_hat
  int exploration_rounds = 0;
  bool epsilon_raised = false;
  bool fell_back = false;
  std::vector<std::size_t> commit_plan;
};

void etc_known_ir(Env& env, std::size_t i_R, Rng& rng, const EtcOptions& opts = {},
                  EtcDiagnostics* diag = nullptr);
void etc_unknown_ir(Env& env, Rng& rng, const EtcOptions& opts = {},
                    EtcDiagnostics* diag = nullptr);

// ---- EXP3.P ----

struct Exp3pOptions {
  std::optional<double> delta_conf;
  std::optional<double> eta;
  std::optional<double> gamma;
  std::optional<double> beta;
  // Inside fallbacks a too-small horizon clamps gamma to 1 instead of throwing.
  bool lenient = false;
  std::function<void(int, const std::vector<double>&)> on_round;  // probabilities before sampling
};

struct Exp3pParams {
  double eta = 0.0;
  double gamma = 0.0;
  double beta = 0.0;
  double delta_conf = 0.0;
};

Exp3pParams exp3p_params(std::size_t K, int T, const Exp3pOptions& opts = {});
void exp3p(Env& env, Rng& rng, const Exp3pOptions& opts = {});

// ---- sticky arms ----

struct MetaArm {
  std::size_t i = 0;
  std::size_t j = 0;
  bool operator==(const MetaArm&) const = default;
};

struct SwitchResult {
  std::vector<double> group_sums;  // per active meta-arm: sum of pair means
  std::vector<int> groups;
  int switches = 0;
};

SwitchResult smart_switch_exploration(Env& env, const std::vector<MetaArm>& active, int U,
                                      Rng& rng);

struct BatchRecord {
  int beta = 0;
  int U = 0;
  int switches = 0;
  long long c = 0;
  std::vector<MetaArm> active;  // explored in this batch
};

struct StickyOptions {
  std::optional<int> B;
};

struct StickyDiagnostics {
  int B = 0;
  double w = 0.0;
  std::vector<BatchRecord> batches;
  MetaArm committed;
  std::vector<double> mu_hat;  // over all K(K+1)/2 meta-arms in lexicographic order
};

void batched_sticky(Env& env, Rng& rng, const StickyOptions& opts = {},
                    StickyDiagnostics* diag = nullptr);

// ---- unknown lambda ----

// Limit state while alternating i, j: even parity is the state right after a pull of j.
double alt_limit_state(double b_i, double b_j, double lambda, int parity);

// 1 + (r_bj - r_ij) / (r_bi - r_ij), clamped to [0,1].
double lambda_from_probes(double r_bi, double r_bj, double r_ij);

struct LambdaProbe {
  double r_bi = 0.0;
  double r_bj = 0.0;
  double r_ij = 0.0;
  double lambda_hat = 0.0;
};

LambdaProbe estimate_lambda(Env& env, int n_tilde, std::size_t i, std::size_t j, int M);

struct UnknownLambdaOptions {
  double delta = 0.1;
  std::optional<int> M;
  EtcOptions etc;
};

struct UnknownLambdaDiagnostics {
  std::string branch;  // "exp3p" or "estimate"
  double discrepancy = 0.0;
  double threshold = 0.0;
  std::vector<double> mu;
  std::vector<double> mu_pair;
  std::size_t j = 0;
  std::vector<double> lambda_hats;
  double lambda_used = 0.0;
  EtcDiagnostics etc;
};

void unknown_lambda(Env& env, Rng& rng, const UnknownLambdaOptions& opts = {},
                    UnknownLambdaDiagnostics* diag = nullptr);

// ---- baselines ----

void ucb1(Env& env);

struct Exp3Options {
  std::optional<double> gamma;
  std::optional<double> eta;
};
void exp3(Env& env, Rng& rng, const Exp3Options& opts = {});

void aae(Env& env);

// Replays a fixed sequence (the benchmark, typically).
void play_sequence(Env& env, const std::vector<std::size_t>& seq);

}  // namespace bdes
