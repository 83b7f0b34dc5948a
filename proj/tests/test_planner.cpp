#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "bdes/errors.hpp"
#include "bdes/harness.hpp"
#include "bdes/planner.hpp"
#include "bdes/rng.hpp"
#include "oracles.hpp"

using namespace bdes;

namespace {

std::vector<ArmSpec> random_arms(Rng& rng, std::size_t K) {
  std::vector<ArmSpec> a(K);
  for (auto& x : a) x = {rng.uniform(), rng.uniform()};
  return a;
}

Instance make(std::vector<ArmSpec> arms, double lambda, int T, double q0 = 1.0) {
  Instance in;
  in.arms = std::move(arms);
  in.lambda = lambda;
  in.horizon = T;
  in.q0 = q0;
  return in;
}

}  // namespace

TEST_CASE("exact_dp on the two-arm sticky instance") {
  Instance in = gen_proposition1_instance(0.1, 4);
  Plan p = exact_dp(in);
  CHECK(p.sequence == std::vector<std::size_t>{0, 1, 0, 1});
  CHECK(p.expected_total == doctest::Approx(2.25).epsilon(1e-12));
  Plan f = fptas_dp(in.arms, in.lambda, in.horizon, 1e-6, in.q0);
  CHECK(f.sequence == p.sequence);
  CHECK(f.expected_total == doctest::Approx(p.expected_total).epsilon(1e-12));
}

TEST_CASE("exact_dp matches brute force, including ties") {
  Rng rng(2024);
  for (int k = 0; k < 60; ++k) {
    std::size_t K = 1 + rng.index(3);
    int T = 1 + static_cast<int>(rng.index(7));
    double lambda = std::vector<double>{0.0, 0.25, 0.6, 1.0}[rng.index(4)];
    auto arms = random_arms(rng, K);
    if (k % 5 == 0) arms.push_back(arms.front());  // exact duplicate forces ties
    Instance in = make(arms, lambda, T, rng.uniform());
    Plan p = exact_dp(in);
    auto bf = oracle::brute_force(in.arms, lambda, in.q0, T);
    CHECK(std::abs(p.expected_total - bf.value) <= 1e-12);
    CHECK(p.sequence == bf.seq);
    CHECK(std::abs(p.expected_total - oracle::sequence_value(in.arms, lambda, in.q0, p.sequence)) <= 1e-9);
  }
}

TEST_CASE("exact_dp respects the cap") {
  Instance in = make({{0.5, 0.5}, {0.2, 0.9}, {0.9, 0.1}}, 0.5, 20);
  CHECK_THROWS_AS(exact_dp(in, 1000), CapExceeded);
}

TEST_CASE("fptas keeps 90% of OPT on random K=3, T=8 instances") {
  Rng rng(7);
  for (int s = 0; s < 100; ++s) {
    auto arms = random_arms(rng, 3);
    Instance in = make(arms, 0.6, 8);
    double opt = oracle::brute_force(arms, 0.6, 1.0, 8).value;
    FptasStats st;
    Plan f = fptas_dp(arms, 0.6, 8, 0.1, 1.0, &st);
    CHECK(f.expected_total >= 0.9 * opt - 1e-12);
    CHECK(f.sequence.size() == 8);
    for (std::size_t t = 0; t < st.frontier_sizes.size(); ++t) {
      CHECK(st.frontier_sizes[t] <= static_cast<std::size_t>(std::ceil((t + 1) / 0.1)) + 1);
    }
  }
  CHECK_THROWS_AS(fptas_dp({{0.5, 0.5}}, 0.5, 3, 0.0), DomainError);
}

TEST_CASE("dominance_prune equals a quadratic Pareto scan") {
  Rng rng(11);
  for (int rep = 0; rep < 3; ++rep) {
    Frontier f;
    std::vector<std::pair<double, double>> pts;
    for (int k = 0; k < 1000; ++k) {
      // coarse values so that ties in either coordinate are common
      double rho = std::floor(rng.uniform() * 50) / 10.0, q = std::floor(rng.uniform() * 40) / 40.0;
      f.push_back({rho, q, 0, -1, 0});
      pts.push_back({rho, q});
    }
    Frontier out = dominance_prune(f);
    auto ref = oracle::pareto_scan(pts);
    REQUIRE(out.size() == ref.size());
    for (std::size_t k = 0; k < out.size(); ++k) {
      CHECK(out[k].rho == ref[k].first);
      CHECK(out[k].q == ref[k].second);
    }
    for (std::size_t a = 0; a < out.size(); ++a)
      for (std::size_t b = 0; b < out.size(); ++b)
        if (a != b) CHECK_FALSE((out[a].rho >= out[b].rho && out[a].q >= out[b].q));
  }
}

TEST_CASE("grid_prune keeps one pair per level with increasing q downwards") {
  Rng rng(12);
  Frontier f;
  for (int k = 0; k < 500; ++k) {
    double rho = rng.uniform() * 3;
    f.push_back({rho, rng.uniform(), static_cast<std::int64_t>(rho * 10), -1, 0});
  }
  Frontier out = grid_prune(f);
  for (std::size_t k = 1; k < out.size(); ++k) {
    CHECK(out[k].grid < out[k - 1].grid);
    CHECK(out[k].q > out[k - 1].q);
  }
  // the top level always survives with its best state
  double top_q = -1;
  std::int64_t top = -1;
  for (const auto& p : f) top = std::max(top, p.grid);
  for (const auto& p : f)
    if (p.grid == top) top_q = std::max(top_q, p.q);
  CHECK(out.front().grid == top);
  CHECK(out.front().q == top_q);
}

TEST_CASE("envelope_dp matches brute force") {
  Rng rng(31);
  for (int k = 0; k < 80; ++k) {
    std::size_t K = 1 + rng.index(3);
    int T = 1 + static_cast<int>(rng.index(8));
    double lambda = std::vector<double>{0.0, 0.1, 0.5, 0.9, 1.0}[rng.index(5)];
    auto arms = random_arms(rng, K);
    double q0 = k % 2 ? 1.0 : rng.uniform();
    Plan e = envelope_dp(arms, lambda, T, q0);
    double bf = oracle::brute_force(arms, lambda, q0, T).value;
    CHECK(std::abs(e.expected_total - bf) <= 1e-9);
    CHECK(e.sequence.size() == static_cast<std::size_t>(T));
  }
}

TEST_CASE("envelope_dp is never beaten by a fine fptas on longer horizons") {
  Rng rng(32);
  for (int k = 0; k < 10; ++k) {
    auto arms = random_arms(rng, 3);
    double lambda = 0.1 + 0.8 * rng.uniform();
    Plan e = envelope_dp(arms, lambda, 40, 1.0);
    Plan f = fptas_dp(arms, lambda, 40, 1e-3, 1.0);
    CHECK(e.expected_total >= f.expected_total - 1e-9);
    CHECK(f.expected_total >= (1 - 1e-3) * e.expected_total - 1e-9);
  }
}

TEST_CASE("best_two_cycle") {
  Instance in = gen_proposition1_instance(0.1);
  TwoCycle c = best_two_cycle(in.arms);
  CHECK(c.i == 0);
  CHECK(c.j == 1);
  CHECK(c.value == doctest::Approx(1.05).epsilon(1e-12));
  // identical arms: smallest pair wins
  TwoCycle t = best_two_cycle({{0.5, 0.5}, {0.5, 0.5}});
  CHECK(t.i == 0);
  CHECK(t.j == 0);
}

TEST_CASE("cycle-2 structure bounds OPT at lambda = 1") {
  Rng rng(5);
  for (int s = 0; s < 30; ++s) {
    auto arms = random_arms(rng, 2 + rng.index(3));
    double opt = oracle::brute_force(arms, 1.0, 1.0, 10).value;
    double v = best_two_cycle(arms).value;
    CHECK(opt >= 5 * v - 1e-12);
    CHECK(opt <= 5 * v + 2 + 1e-12);
  }
}

TEST_CASE("benchmark_opt routing") {
  Instance small = gen_proposition1_instance(0.1, 6);
  CHECK(benchmark_opt(small).expected_total == doctest::Approx(exact_dp(small).expected_total));
  Instance big = make({{0.9, 0.2}, {0.4, 0.9}, {0.6, 0.6}}, 0.3, 500);
  Plan env = benchmark_opt(big);
  CHECK(env.sequence.size() == 500);
  CHECK(std::abs(env.expected_total - oracle::sequence_value(big.arms, 0.3, 1.0, env.sequence)) <= 1e-9);
  PlannerOptions po;
  po.fptas_epsilon = 0.05;
  Instance mid = make(big.arms, 0.3, 60);
  Plan f = benchmark_opt(mid, po);
  CHECK(f.expected_total >= 0.95 * envelope_dp(mid.arms, 0.3, 60).expected_total - 1e-9);
  Instance sticky = gen_proposition1_instance(0.1, 2001);
  Plan sp = benchmark_opt(sticky);
  CHECK(sp.expected_total >= 1000 * 1.05);
}

TEST_CASE("approximate-input check") {
  std::vector<ArmSpec> truth{{0.6, 0.4}, {0.3, 0.9}};
  std::vector<ArmSpec> far{{0.6, 0.4}, {0.3, 0.7}};
  CHECK_THROWS_AS(approx_input_guarantee_check(truth, far, 0.5, 6, 0.05), PreconditionError);

  Rng rng(77);
  const double d = 0.05;
  for (int s = 0; s < 100; ++s) {
    auto t = random_arms(rng, 2);
    double lambda = rng.uniform();
    // the extremal shift, clamped to the unit square
    std::vector<ArmSpec> e = t;
    for (auto& a : e) {
      a.r = std::clamp(a.r - d, 0.0, 1.0);
      a.b = std::clamp(a.b + d, 0.0, 1.0);
    }
    CHECK(approx_input_guarantee_check(t, e, lambda, 6, d).ok);
    // mixed corners: only the looser 4 delta T margin is claimed
    for (int corner = 0; corner < 16; ++corner) {
      std::vector<ArmSpec> m = t;
      for (std::size_t i = 0; i < 2; ++i) {
        m[i].r = std::clamp(m[i].r + ((corner >> (2 * i)) & 1 ? d : -d), 0.0, 1.0);
        m[i].b = std::clamp(m[i].b + ((corner >> (2 * i + 1)) & 1 ? d : -d), 0.0, 1.0);
      }
      auto res = approx_input_guarantee_check(t, m, lambda, 6, d);
      CHECK(res.value >= res.opt - 4 * d * 6 - 1e-12);
    }
  }
}
