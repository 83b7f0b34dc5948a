#include "bdes/learners.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bdes/errors.hpp"
#include "bdes/planner.hpp"

namespace bdes {

// ---------------------------------------------------------------- ETC

int n_lambda(double lambda, double eps) {
  if (!(lambda > 0.0 && lambda <= 1.0)) throw DomainError("n_lambda: lambda must be in (0,1]");
  if (!(eps > 0.0)) throw DomainError("n_lambda: eps must be > 0");
  if (lambda >= 1.0) return 1;
  double num = std::log(1.0 / (lambda * eps));
  if (num <= 0.0) return 1;
  double n = std::ceil(num / std::log(1.0 / (1.0 - lambda)) - 1e-9);
  return std::max(1, static_cast<int>(n));
}

EtcParams etc_params_for(double epsilon, int T, double lambda) {
  if (!(epsilon > 0.0)) throw DomainError("etc: epsilon must be > 0");
  if (T < 2) throw DomainError("etc: horizon must be >= 2");
  EtcParams p;
  p.epsilon = epsilon;
  p.delta = epsilon / 4.0;
  p.M = static_cast<int>(std::ceil(std::log(static_cast<double>(T)) / (epsilon * epsilon)));
  p.M = std::max(p.M, 1);
  p.N = n_lambda(lambda, epsilon);
  p.N_R = p.N;
  return p;
}

EtcParams tune_etc(int K, int T, double lambda) {
  if (!(lambda > 0.0 && lambda < 1.0)) {
    throw DomainError("tune_etc: lambda must be in (0,1); use exp3p for lambda=0 or batched_sticky for lambda=1");
  }
  if (K < 1) throw DomainError("tune_etc: K must be >= 1");
  if (T < 2) throw DomainError("tune_etc: horizon must be >= 2");
  double lt = std::log(static_cast<double>(T));
  double ratio = K * lt * std::log(lambda) / (T * std::log(1.0 - lambda));
  double eps = std::min(0.5, std::cbrt(ratio));
  if (!(eps > 0.0)) eps = std::numeric_limits<double>::min();
  return etc_params_for(eps, T, lambda);
}

long long etc_budget(int K, const EtcParams& p) {
  return 2LL * K * p.M * (p.N + 1LL) + p.N_R;
}

namespace {

struct Resolved {
  EtcParams params;
  bool raised = false;
  bool feasible = false;
};

Resolved resolve_etc(int K, int T, double lambda, const EtcOptions& opts, bool unknown_ir) {
  const double lt = std::log(static_cast<double>(T));
  auto make = [&](double eps) {
    EtcParams p = etc_params_for(eps, T, lambda);
    if (unknown_ir) {
      p.delta = 2.0 * eps;
      p.M = std::max(1, static_cast<int>(std::ceil(K * K * lt / (eps * eps))));
    }
    if (opts.M) p.M = *opts.M;
    return p;
  };
  Resolved r;
  double eps = opts.epsilon ? *opts.epsilon : tune_etc(K, T, lambda).epsilon;
  r.params = make(eps);
  const long long cap = T / 2;
  if (etc_budget(K, r.params) <= cap) {
    r.feasible = true;
    return r;
  }
  while (eps < 0.5) {
    eps = std::min(0.5, eps * 1.02);
    r.params = make(eps);
    if (etc_budget(K, r.params) <= cap) {
      r.raised = true;
      r.feasible = true;
      return r;
    }
  }
  return r;
}

void exp3p_fallback(Env& env, Rng& rng) {
  if (env.done()) return;
  Exp3pOptions o;
  o.lenient = true;
  exp3p(env, rng, o);
}

void run_etc(Env& env, Rng& rng, const EtcOptions& opts, EtcDiagnostics* diag,
             std::optional<std::size_t> i_R) {
  const int K = static_cast<int>(env.num_arms());
  const int T = env.remaining();
  if (T <= 0) return;
  EtcDiagnostics local;
  EtcDiagnostics& d = diag ? *diag : local;

  const double plan_lambda = opts.lambda.value_or(env.lambda());
  double tune_lambda = plan_lambda;
  if (T < 2) {
    exp3p_fallback(env, rng);
    return;
  }
  const double lo = 1.0 / T, hi = 1.0 - 1.0 / T;
  if (tune_lambda < lo || tune_lambda > hi) {
    tune_lambda = std::clamp(tune_lambda, lo, hi);
    env.flag("etc_lambda_clamped");
  }

  Resolved res = resolve_etc(K, T, tune_lambda, opts, !i_R.has_value());
  d.params = res.params;
  if (!res.feasible) {
    env.flag("etc_budget_infeasible");
    d.fell_back = true;
    exp3p_fallback(env, rng);
    return;
  }
  if (res.raised) {
    env.flag("etc_epsilon_raised");
    d.epsilon_raised = true;
  }
  const EtcParams& p = res.params;
  const auto Ku = static_cast<std::size_t>(K);
  const int start = env.round();

  d.r_hat.assign(Ku, 0.0);
  d.v_hat.assign(Ku, 0.0);
  d.b_hat.assign(Ku, 0.0);

  // reward estimates: restore the state, then one sample
  for (std::size_t i = 0; i < Ku; ++i) {
    long sum = 0;
    for (int m = 0; m < p.M; ++m) {
      if (i_R) {
        for (int n = 0; n < p.N_R; ++n) env.pull(*i_R);
      } else {
        std::size_t z = rng.index(Ku);
        for (int n = 0; n < p.N; ++n) env.pull(z);
      }
      sum += env.pull(i);
    }
    d.r_hat[i] = static_cast<double>(sum) / p.M;
  }

  // r_i b_i estimates: settle on b_i, then M samples
  for (std::size_t i = 0; i < Ku; ++i) {
    for (int n = 0; n < p.N; ++n) env.pull(i);
    long sum = 0;
    for (int m = 0; m < p.M; ++m) sum += env.pull(i);
    d.v_hat[i] = static_cast<double>(sum) / p.M;
  }

  const double floor_r = 1.0 / (static_cast<double>(env.horizon()) * env.horizon());
  const double b_cap = i_R ? 1.0 : static_cast<double>(K);
  for (std::size_t i = 0; i < Ku; ++i) {
    d.b_hat[i] = std::clamp(d.v_hat[i] / std::max(d.r_hat[i], floor_r), 0.0, b_cap);
  }

  std::vector<ArmSpec> est(Ku);
  std::size_t replenish = 0;
  if (i_R) {
    replenish = *i_R;
    for (std::size_t i = 0; i < Ku; ++i) est[i] = {d.r_hat[i], d.b_hat[i]};
    d.scale = 1.0;
  } else {
    replenish = static_cast<std::size_t>(
        std::max_element(d.b_hat.begin(), d.b_hat.end()) - d.b_hat.begin());
    double m = d.b_hat[replenish] > 0.0 ? d.b_hat[replenish] : 1.0;
    d.scale = m;
    for (std::size_t i = 0; i < Ku; ++i) {
      est[i] = {std::min(1.0, d.r_hat[i] * m), std::clamp(d.b_hat[i] / m, 0.0, 1.0)};
    }
  }
  for (int n = 0; n < p.N_R; ++n) env.pull(replenish);
  d.exploration_rounds = env.round() - start;

  const int Tc = env.remaining();
  if (Tc <= 0) return;
  Plan plan = opts.dp_epsilon > 0.0 ? fptas_dp(est, plan_lambda, Tc, opts.dp_epsilon, 1.0)
                                    : envelope_dp(est, plan_lambda, Tc, 1.0);
  d.commit_plan = plan.sequence;
  play_sequence(env, plan.sequence);
}

}  // namespace

void etc_known_ir(Env& env, std::size_t i_R, Rng& rng, const EtcOptions& opts,
                  EtcDiagnostics* diag) {
  if (i_R >= env.num_arms()) throw DomainError("etc_known_ir: i_R out of range");
  run_etc(env, rng, opts, diag, i_R);
}

void etc_unknown_ir(Env& env, Rng& rng, const EtcOptions& opts, EtcDiagnostics* diag) {
  run_etc(env, rng, opts, diag, std::nullopt);
}

// ---------------------------------------------------------------- EXP3.P

Exp3pParams exp3p_params(std::size_t K, int T, const Exp3pOptions& opts) {
  if (K < 1) throw DomainError("exp3p: need at least one arm");
  if (T < 1) throw DomainError("exp3p: horizon must be >= 1");
  const double k = static_cast<double>(K);
  const double lk = std::log(k);
  Exp3pParams p;
  p.delta_conf = opts.delta_conf.value_or(1.0 / T);
  if (!(p.delta_conf > 0.0)) throw DomainError("exp3p: delta_conf must be > 0");
  p.eta = opts.eta.value_or(0.95 * std::sqrt(lk / (k * T)));
  p.gamma = opts.gamma.value_or(1.05 * std::sqrt(k * lk / T));
  p.beta = opts.beta.value_or(std::sqrt(std::max(0.0, std::log(k / p.delta_conf)) / (k * T)));
  if (p.gamma >= 1.0) {
    if (!opts.lenient) {
      double min_t = 1.1025 * k * lk;
      throw DomainError("exp3p: gamma >= 1; horizon must exceed " + std::to_string(min_t) +
                        " for K=" + std::to_string(K));
    }
    p.gamma = 1.0;
  }
  return p;
}

void exp3p(Env& env, Rng& rng, const Exp3pOptions& opts) {
  const std::size_t K = env.num_arms();
  const int T = env.remaining();
  if (T <= 0) return;
  Exp3pParams par = exp3p_params(K, T, opts);
  if (opts.lenient && par.gamma >= 1.0) env.flag("exp3p_gamma_clamped");
  const double k = static_cast<double>(K);
  std::vector<double> G(K, 0.0), p(K, 0.0), w(K, 0.0);
  int t = 0;
  while (!env.done()) {
    double gmax = *std::max_element(G.begin(), G.end());
    double sw = 0.0;
    for (std::size_t i = 0; i < K; ++i) {
      w[i] = std::exp(par.eta * (G[i] - gmax));
      sw += w[i];
    }
    for (std::size_t i = 0; i < K; ++i) p[i] = (1.0 - par.gamma) * w[i] / sw + par.gamma / k;
    if (opts.on_round) opts.on_round(t, p);
    std::size_t I = rng.categorical(p);
    int g = env.pull(I);
    for (std::size_t i = 0; i < K; ++i) G[i] += ((i == I ? g : 0) + par.beta) / p[i];
    ++t;
  }
}

// ---------------------------------------------------------------- sticky arms

SwitchResult smart_switch_exploration(Env& env, const std::vector<MetaArm>& active, int U,
                                      Rng& rng) {
  if (active.empty()) throw DomainError("smart_switch_exploration: empty active set");
  if (U < 1) throw DomainError("smart_switch_exploration: U must be >= 1");
  const std::size_t n = active.size();
  SwitchResult res;
  res.group_sums.assign(n, 0.0);
  res.groups.assign(n, 0);
  std::vector<bool> done(n, false);
  std::size_t left = n;

  auto explore = [&](std::size_t idx, std::size_t x, std::size_t anchor) {
    for (int u = 0; u < U; ++u) {
      int a = env.pull(x);
      int b = env.pull(anchor);
      res.group_sums[idx] += 0.5 * (a + b);
      ++res.groups[idx];
    }
    done[idx] = true;
    --left;
  };

  while (left > 0) {
    std::size_t pick = rng.index(left);
    std::size_t idx = 0;
    for (std::size_t k = 0; k < n; ++k) {
      if (done[k]) continue;
      if (pick == 0) {
        idx = k;
        break;
      }
      --pick;
    }
    const std::size_t anchor = active[idx].i;
    env.pull(anchor);  // stale-state observation, dropped
    ++res.switches;
    explore(idx, active[idx].j, anchor);
    // keep the anchor: every remaining meta-arm through it costs no switch
    for (;;) {
      std::size_t next = n;
      for (std::size_t k = 0; k < n; ++k) {
        if (!done[k] && (active[k].i == anchor || active[k].j == anchor)) {
          next = k;
          break;
        }
      }
      if (next == n) break;
      std::size_t x = active[next].i == anchor ? active[next].j : active[next].i;
      explore(next, x, anchor);
    }
  }
  return res;
}

void batched_sticky(Env& env, Rng& rng, const StickyOptions& opts, StickyDiagnostics* diag) {
  const std::size_t K = env.num_arms();
  const int T = env.remaining();
  if (T <= 0) return;
  StickyDiagnostics local;
  StickyDiagnostics& d = diag ? *diag : local;

  int B = opts.B.value_or(static_cast<int>(std::ceil(2.0 * std::log(static_cast<double>(T)))));
  B = std::max(B, 1);
  const double w = std::pow(static_cast<double>(T), 1.0 / B);
  d.B = B;
  d.w = w;

  std::vector<MetaArm> all;
  for (std::size_t i = 0; i < K; ++i)
    for (std::size_t j = i; j < K; ++j) all.push_back({i, j});
  std::vector<std::size_t> active(all.size());
  for (std::size_t k = 0; k < active.size(); ++k) active[k] = k;
  std::vector<double> sums(all.size(), 0.0);
  long long c = 0;
  const double log_term = std::log(2.0 * static_cast<double>(K) * K * T * B);

  auto mean = [&](std::size_t idx) { return c > 0 ? sums[idx] / static_cast<double>(c) : 0.0; };

  for (int beta = 1; beta <= B - 1; ++beta) {
    int U = std::max(1, static_cast<int>(std::floor(std::pow(w, beta))));
    const long long cost = (2LL * U + 1) * static_cast<long long>(active.size());
    if (cost > env.remaining()) break;
    std::vector<MetaArm> act;
    for (std::size_t idx : active) act.push_back(all[idx]);
    SwitchResult r = smart_switch_exploration(env, act, U, rng);
    c += U;
    for (std::size_t k = 0; k < active.size(); ++k) sums[active[k]] += r.group_sums[k];
    d.batches.push_back({beta, U, r.switches, c, act});

    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t idx : active) best = std::max(best, mean(idx));
    const double radius = std::sqrt(2.0 * log_term / static_cast<double>(c));
    std::vector<std::size_t> keep;
    for (std::size_t idx : active) {
      if (!(mean(idx) < best - radius)) keep.push_back(idx);
    }
    active = std::move(keep);
  }

  std::size_t chosen = active.front();
  for (std::size_t idx : active) {
    if (mean(idx) > mean(chosen)) chosen = idx;
  }
  d.committed = all[chosen];
  d.mu_hat.resize(all.size());
  for (std::size_t k = 0; k < all.size(); ++k) d.mu_hat[k] = mean(k);

  const MetaArm m = all[chosen];
  std::size_t next = m.i;
  const auto& hist = env.trajectory().arms;
  if (!hist.empty() && hist.back() == m.i) next = m.j;
  while (!env.done()) {
    env.pull(next);
    next = next == m.i ? m.j : m.i;
  }
}

// ---------------------------------------------------------------- unknown lambda

double alt_limit_state(double b_i, double b_j, double lambda, int parity) {
  if (!(lambda > 0.0 && lambda <= 1.0)) throw DomainError("alt_limit_state: lambda must be in (0,1]");
  if (parity % 2 == 0) return (b_j + (1.0 - lambda) * b_i) / (2.0 - lambda);
  return (b_i + (1.0 - lambda) * b_j) / (2.0 - lambda);
}

double lambda_from_probes(double r_bi, double r_bj, double r_ij) {
  double den = r_bi - r_ij;
  if (std::abs(den) < 1e-9) throw DegenerateProbe("estimate_lambda: probes r_{i,b_i} and r_{i,j} coincide");
  return std::clamp(1.0 + (r_bj - r_ij) / den, 0.0, 1.0);
}

LambdaProbe estimate_lambda(Env& env, int n_tilde, std::size_t i, std::size_t j, int M) {
  if (i == j || i >= env.num_arms() || j >= env.num_arms()) {
    throw DomainError("estimate_lambda: need two distinct valid arms");
  }
  if (n_tilde < 1 || M < 1) throw DomainError("estimate_lambda: n_tilde and M must be >= 1");
  if (3LL * M * (2LL * n_tilde + 3) > env.remaining()) {
    throw PreconditionError("estimate_lambda: probe budget exceeds the remaining rounds");
  }
  LambdaProbe out;
  long s = 0;
  for (int m = 0; m < M; ++m) {
    for (int n = 0; n < n_tilde; ++n) env.pull(j);
    s += env.pull(i);
  }
  out.r_bj = static_cast<double>(s) / M;
  s = 0;
  for (int m = 0; m < M; ++m) {
    for (int n = 0; n < n_tilde; ++n) env.pull(j);
    for (int n = 0; n < n_tilde; ++n) env.pull(i);
    s += env.pull(i);
  }
  out.r_bi = static_cast<double>(s) / M;
  s = 0;
  for (int m = 0; m < M; ++m) {
    for (int n = 0; n < n_tilde; ++n) env.pull(i);
    for (int n = 0; n < n_tilde; ++n) {
      env.pull(i);
      env.pull(j);
    }
    s += env.pull(i);
  }
  out.r_ij = static_cast<double>(s) / M;
  out.lambda_hat = lambda_from_probes(out.r_bi, out.r_bj, out.r_ij);
  return out;
}

void unknown_lambda(Env& env, Rng& rng, const UnknownLambdaOptions& opts,
                    UnknownLambdaDiagnostics* diag) {
  const std::size_t K = env.num_arms();
  const int T = env.remaining();
  if (T <= 0) return;
  UnknownLambdaDiagnostics local;
  UnknownLambdaDiagnostics& d = diag ? *diag : local;
  auto go_exp3p = [&](const char* why) {
    d.branch = "exp3p";
    if (why) env.flag(why);
    exp3p_fallback(env, rng);
  };
  if (K < 2) {
    go_exp3p(nullptr);
    return;
  }
  const double per_arm = static_cast<double>(T) / K;
  const int L = static_cast<int>(std::ceil(std::pow(per_arm, 2.0 / 3.0)));
  const long long screen = 2LL * K * L + 4LL * L * (K - 1);
  if (screen > T / 2) {
    go_exp3p("unknown_lambda_budget");
    return;
  }

  d.mu.assign(K, 0.0);
  for (std::size_t i = 0; i < K; ++i) {
    for (int n = 0; n < L; ++n) env.pull(i);
    long s = 0;
    for (int n = 0; n < L; ++n) s += env.pull(i);
    d.mu[i] = static_cast<double>(s) / L;
  }
  const std::size_t j = rng.index(K);
  d.j = j;
  d.mu_pair.assign(K, 0.0);
  double disc = -1.0;
  std::size_t i_star = j == 0 ? 1 : 0;
  for (std::size_t i = 0; i < K; ++i) {
    if (i == j) continue;
    for (int n = 0; n < L; ++n) {
      env.pull(i);
      env.pull(j);
    }
    long s = 0;
    for (int n = 0; n < L; ++n) {
      s += env.pull(i);
      env.pull(j);
    }
    d.mu_pair[i] = static_cast<double>(s) / L;
    double gap = std::abs(d.mu[i] - d.mu_pair[i]);
    if (gap > disc) {
      disc = gap;
      i_star = i;
    }
  }
  const double lt = std::log(static_cast<double>(T));
  d.discrepancy = disc;
  d.threshold = 3.0 * std::sqrt(lt) / std::cbrt(per_arm);
  if (disc <= d.threshold) {
    go_exp3p(nullptr);
    return;
  }

  d.branch = "estimate";
  const double delta = opts.delta;
  int M = opts.M.value_or(static_cast<int>(std::ceil(lt / (delta * delta))));
  const int n0 = std::max(1, static_cast<int>(std::ceil(lt)));
  auto cost = [&](long long n) { return 3LL * M * (2LL * n + 3); };
  if (cost(n0) + cost(2LL * n0) > env.remaining() / 2) {
    long long per = 3LL * (2LL * n0 + 3) + 3LL * (4LL * n0 + 3);
    M = static_cast<int>((env.remaining() / 2) / per);
    if (M < 1) {
      go_exp3p("unknown_lambda_budget");
      return;
    }
    env.flag("unknown_lambda_M_shrunk");
  }
  double l1 = 0.0, l2 = 0.0;
  try {
    l1 = estimate_lambda(env, n0, i_star, j, M).lambda_hat;
    l2 = estimate_lambda(env, 2 * n0, i_star, j, M).lambda_hat;
    d.lambda_hats = {l1, l2};
    long long n = 4LL * n0;
    while (std::abs(l1 - l2) > delta) {
      if (static_cast<double>(n) > static_cast<double>(T) / (100.0 * M) || cost(n) > env.remaining() / 2) {
        env.flag("lambda_doubling_cap");
        break;
      }
      double l3 = estimate_lambda(env, static_cast<int>(n), i_star, j, M).lambda_hat;
      d.lambda_hats.push_back(l3);
      l1 = l2;
      l2 = l3;
      n *= 2;
    }
  } catch (const DegenerateProbe&) {
    go_exp3p("degenerate_probe");
    return;
  }
  if (env.done()) return;
  const double Tr = env.remaining();
  d.lambda_used = std::clamp(l1, 1.0 / Tr, 1.0 - 1.0 / Tr);
  EtcOptions eo = opts.etc;
  eo.lambda = d.lambda_used;
  if (eo.i_R) {
    etc_known_ir(env, *eo.i_R, rng, eo, &d.etc);
  } else {
    etc_unknown_ir(env, rng, eo, &d.etc);
  }
}

// ---------------------------------------------------------------- baselines

void ucb1(Env& env) {
  const std::size_t K = env.num_arms();
  std::vector<long> n(K, 0), s(K, 0);
  while (!env.done()) {
    std::size_t arm = K;
    for (std::size_t i = 0; i < K; ++i) {
      if (n[i] == 0) {
        arm = i;
        break;
      }
    }
    if (arm == K) {
      const double lt = std::log(static_cast<double>(env.round()));
      double best = -std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < K; ++i) {
        double idx = static_cast<double>(s[i]) / n[i] + std::sqrt(2.0 * lt / n[i]);
        if (idx > best) {
          best = idx;
          arm = i;
        }
      }
    }
    s[arm] += env.pull(arm);
    ++n[arm];
  }
}

void exp3(Env& env, Rng& rng, const Exp3Options& opts) {
  const std::size_t K = env.num_arms();
  const int T = env.remaining();
  if (T <= 0) return;
  const double k = static_cast<double>(K);
  double gamma = opts.gamma.value_or(std::min(1.0, std::sqrt(k * std::log(k) / ((std::exp(1.0) - 1.0) * T))));
  double eta = opts.eta.value_or(gamma / k);
  if (!(gamma >= 0.0 && gamma <= 1.0) || !(eta >= 0.0)) throw DomainError("exp3: need gamma in [0,1] and eta >= 0");
  std::vector<double> G(K, 0.0), p(K, 0.0), w(K, 0.0);
  while (!env.done()) {
    double gmax = *std::max_element(G.begin(), G.end());
    double sw = 0.0;
    for (std::size_t i = 0; i < K; ++i) {
      w[i] = std::exp(eta * (G[i] - gmax));
      sw += w[i];
    }
    for (std::size_t i = 0; i < K; ++i) p[i] = (1.0 - gamma) * w[i] / sw + gamma / k;
    std::size_t I = rng.categorical(p);
    int g = env.pull(I);
    G[I] += g / p[I];
  }
}

void aae(Env& env) {
  const std::size_t K = env.num_arms();
  const double T = env.horizon();
  std::vector<std::size_t> active(K);
  for (std::size_t i = 0; i < K; ++i) active[i] = i;
  std::vector<long> s(K, 0);
  long n = 0;  // pulls per active arm
  const double log_term = std::log(2.0 * static_cast<double>(K) * T * T);
  while (!env.done()) {
    for (std::size_t a : active) {
      if (env.done()) return;
      s[a] += env.pull(a);
    }
    ++n;
    if (active.size() < 2) continue;
    const double radius = std::sqrt(log_term / (2.0 * n));
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t a : active) best = std::max(best, static_cast<double>(s[a]) / n);
    std::vector<std::size_t> keep;
    for (std::size_t a : active) {
      if (static_cast<double>(s[a]) / n + radius >= best - radius) keep.push_back(a);
    }
    active = std::move(keep);
  }
}

void play_sequence(Env& env, const std::vector<std::size_t>& seq) {
  if (seq.size() < static_cast<std::size_t>(env.remaining())) {
    throw DomainError("play_sequence: sequence shorter than the remaining horizon");
  }
  for (std::size_t k = 0; !env.done(); ++k) env.pull(seq[k]);
}

}  // namespace bdes
