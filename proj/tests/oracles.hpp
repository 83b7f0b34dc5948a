#pragma once
// Reference implementations for tests. Written from the model definition, sharing no code
// with the library beyond the data types.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "bdes/env.hpp"
#include "bdes/instance.hpp"
#include "bdes/rng.hpp"

namespace oracle {

inline double iterate_state(double lambda, double q0, const std::vector<double>& bs) {
  double q = q0;
  for (double b : bs) q = (1.0 - lambda) * q + lambda * b;
  return q;
}

inline double sequence_value(const std::vector<bdes::ArmSpec>& arms, double lambda, double q0,
                             const std::vector<std::size_t>& seq) {
  double q = q0, v = 0.0;
  for (std::size_t a : seq) {
    v += arms[a].r * q;
    q = (1.0 - lambda) * q + lambda * arms[a].b;
  }
  return v;
}

struct BruteResult {
  double value = -1.0;
  std::vector<std::size_t> seq;
};

// Odometer over all K^T sequences in lexicographic order; keeps the first maximum.
inline BruteResult brute_force(const std::vector<bdes::ArmSpec>& arms, double lambda, double q0, int T) {
  const std::size_t K = arms.size();
  std::vector<std::size_t> seq(static_cast<std::size_t>(T), 0);
  BruteResult best;
  for (;;) {
    double v = oracle::sequence_value(arms, lambda, q0, seq);
    if (v > best.value + 1e-12) {
      best.value = v;
      best.seq = seq;
    }
    int pos = T - 1;
    while (pos >= 0 && ++seq[static_cast<std::size_t>(pos)] == K) {
      seq[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
  }
  return best;
}

// O(n^2) Pareto filter: keep points no other point weakly dominates (duplicates keep one copy).
inline std::vector<std::pair<double, double>> pareto_scan(const std::vector<std::pair<double, double>>& pts) {
  std::vector<std::pair<double, double>> out;
  for (std::size_t a = 0; a < pts.size(); ++a) {
    bool dominated = false;
    for (std::size_t c = 0; c < pts.size() && !dominated; ++c) {
      if (c == a) continue;
      bool weakly = pts[c].first >= pts[a].first && pts[c].second >= pts[a].second;
      bool strictly = pts[c].first > pts[a].first || pts[c].second > pts[a].second;
      if (weakly && (strictly || c < a)) dominated = true;
    }
    if (!dominated) out.push_back(pts[a]);
  }
  std::sort(out.begin(), out.end(), [](auto x, auto y) { return x.first > y.first; });
  return out;
}

// Plain EXP3 with importance-weighted gains and uniform mixing gamma.
inline std::vector<std::size_t> reference_exp3(bdes::Env& env, bdes::Rng& rng, double eta, double gamma) {
  const std::size_t K = env.num_arms();
  std::vector<double> G(K, 0.0);
  std::vector<std::size_t> arms;
  while (!env.done()) {
    double top = G[0];
    for (double g : G) top = std::max(top, g);
    std::vector<double> p(K);
    double s = 0.0;
    for (std::size_t i = 0; i < K; ++i) s += (p[i] = std::exp(eta * (G[i] - top)));
    for (std::size_t i = 0; i < K; ++i) p[i] = (1.0 - gamma) * p[i] / s + gamma / static_cast<double>(K);
    double u = rng.uniform(), acc = 0.0;
    std::size_t I = K - 1;
    for (std::size_t i = 0; i < K; ++i) {
      acc += p[i];
      if (u < acc) {
        I = i;
        break;
      }
    }
    int g = env.pull(I);
    G[I] += g / p[I];
    arms.push_back(I);
  }
  return arms;
}

// Probe means without sampling noise, by running the state recursion long enough to converge.
struct ExactProbes {
  double r_bi, r_bj, r_ij;
};

inline ExactProbes exact_probes(double r_i, double b_i, double b_j, double lambda, int settle = 4000) {
  std::vector<double> js(static_cast<std::size_t>(settle), b_j), is(static_cast<std::size_t>(settle), b_i);
  double after_j = oracle::iterate_state(lambda, 1.0, js);
  double after_i = oracle::iterate_state(lambda, after_j, is);
  std::vector<double> alt;
  for (int k = 0; k < settle; ++k) {
    alt.push_back(b_i);
    alt.push_back(b_j);
  }
  double after_alt = oracle::iterate_state(lambda, after_i, alt);
  return {r_i * after_i, r_i * after_j, r_i * after_alt};
}

}  // namespace oracle
