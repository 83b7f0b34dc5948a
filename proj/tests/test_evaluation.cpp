#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "bdes/errors.hpp"
#include "bdes/evaluation.hpp"
#include "bdes/harness.hpp"
#include "bdes/learners.hpp"
#include "bdes/planner.hpp"
#include "oracles.hpp"

using namespace bdes;

namespace {

Trajectory replay(const Instance& in, const std::vector<std::size_t>& seq, std::uint64_t seed) {
  Rng rng(seed);
  Env env(in, rng);
  play_sequence(env, seq);
  return env.take_trajectory();
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

TEST_CASE("benchmark against itself has zero regret") {
  Instance in = make({{0.9, 0.2}, {0.4, 0.9}, {0.6, 0.5}}, 0.35, 400);
  Plan p = benchmark_opt(in);
  auto des = des_regret(replay(in, p.sequence, 1), p);
  for (double x : des) CHECK(x == 0.0);
}

TEST_CASE("always playing the second sticky arm loses 0.035 per round") {
  Instance in = gen_proposition1_instance(0.1, 20000);
  Plan p = benchmark_opt(in);
  auto des = des_regret(replay(in, std::vector<std::size_t>(20000, 1), 2), p);
  double slope = (des[19999] - des[9999]) / 10000.0;
  CHECK(std::abs(slope - (1.05 / 2 - 0.49)) <= 1e-3);
}

TEST_CASE("single round regret") {
  Instance in = make({{0.9, 0.2}, {0.4, 0.9}}, 0.5, 1, 0.7);
  Plan p = benchmark_opt(in);
  auto des = des_regret(replay(in, {1}, 3), p);
  CHECK(des[0] == doctest::Approx(0.9 * 0.7 - 0.4 * 0.7));
}

TEST_CASE("horizon mismatch is an error") {
  Instance in = make({{0.9, 0.2}, {0.4, 0.9}}, 0.5, 5);
  Plan p = benchmark_opt(in);
  Instance longer = in;
  longer.horizon = 6;
  CHECK_THROWS_AS(des_regret(replay(longer, {0, 0, 0, 0, 0, 0}, 1), p), DomainError);
}

TEST_CASE("external regret") {
  Instance in = make({{0.9, 0.2}, {0.4, 0.9}}, 0.5, 300);
  auto ext = external_regret(replay(in, std::vector<std::size_t>(300, 0), 1), in);
  for (double x : ext) CHECK(std::abs(x) <= 1e-12);

  // static states: both regrets are classical pseudo-regret
  Instance flat = make({{0.9, 0.2}, {0.4, 0.9}, {0.7, 0.1}}, 0.0, 500, 0.8);
  Plan p = benchmark_opt(flat);
  Rng pick(4);
  for (int rep = 0; rep < 5; ++rep) {
    std::vector<std::size_t> seq(500);
    for (auto& a : seq) a = pick.index(3);
    Trajectory tr = replay(flat, seq, rep);
    auto d = des_regret(tr, p);
    auto e = external_regret(tr, flat);
    for (std::size_t t = 0; t < 500; ++t) CHECK(std::abs(d[t] - e[t]) <= 1e-9);
  }
}

TEST_CASE("DES regret never exceeds the state-free gap") {
  Instance in = gen_proposition1_instance(0.1, 200);
  Plan p = benchmark_opt(in);
  Rng pick(9);
  for (int rep = 0; rep < 10; ++rep) {
    std::vector<std::size_t> seq(200);
    for (auto& a : seq) a = pick.index(2);
    Trajectory tr = replay(in, seq, rep);
    auto d = des_regret(tr, p);
    double alg = 0.0;
    for (std::size_t t = 0; t < 200; ++t) {
      alg += tr.expected[t];
      CHECK(d[t] <= 0.7 * (t + 1) - alg + 1e-9);
    }
  }
}

TEST_CASE("regret ignores reward noise for a fixed arm sequence") {
  Instance in = make({{0.9, 0.2}, {0.4, 0.9}}, 0.3, 300);
  in.noise = NoiseModel{0.1, NoiseKind::gaussian, true};
  Plan p = benchmark_opt(in);
  std::vector<std::size_t> seq(300);
  for (std::size_t t = 0; t < 300; ++t) seq[t] = (t / 7) % 2;
  RegretCurve a = regret_curve(replay(in, seq, 1), p, in);
  RegretCurve b = regret_curve(replay(in, seq, 2), p, in);
  CHECK(a.des == b.des);
  CHECK(a.ext == b.ext);
}

TEST_CASE("trajectory expectations follow the recursion") {
  Instance in = make({{0.9, 0.2}, {0.4, 0.9}, {0.5, 0.5}}, 0.45, 400, 0.3);
  Rng er(1), lr(2);
  Env env(in, er);
  exp3(env, lr);
  const Trajectory& tr = env.trajectory();
  for (std::size_t t = 0; t < tr.size(); ++t) {
    std::vector<double> bs;
    for (std::size_t s = 0; s < t; ++s) bs.push_back(in.arms[tr.arms[s]].b);
    double q = oracle::iterate_state(in.lambda, in.q0, bs);
    CHECK(std::abs(tr.expected[t] - in.arms[tr.arms[t]].r * q) <= 1e-9);
  }
}

TEST_CASE("aggregate statistics") {
  CHECK(default_checkpoints(10) == std::vector<int>{1, 2, 4, 8, 10});
  CHECK(default_checkpoints(8) == std::vector<int>{1, 2, 4, 8});
  CHECK_THROWS_AS(aggregate({}), DomainError);

  RegretCurve one;
  one.des = {1.0, 2.0, 3.0};
  one.ext = {0.5, 0.5, 0.5};
  RunSummary s = aggregate({one}, {1, 2, 3});
  for (int k = 0; k < 3; ++k) {
    CHECK(s.des[k].mean == one.des[k]);
    CHECK(s.des[k].std == 0.0);
    CHECK(s.des[k].min == one.des[k]);
    CHECK(s.des[k].max == one.des[k]);
  }
  RegretCurve mirror = one;
  for (double& x : mirror.des) x = -x;
  RunSummary m = aggregate({one, mirror}, {3});
  CHECK(m.des[0].mean == 0.0);
  CHECK(m.des[0].min == -3.0);
  CHECK(m.des[0].max == 3.0);

  RegretCurve short_curve;
  short_curve.des = {1.0};
  short_curve.ext = {1.0};
  CHECK_THROWS_AS(aggregate({one, short_curve}), DomainError);
  CHECK_THROWS_AS(aggregate({one}, {4}), DomainError);

  // 100 curves against a two-pass computation
  Rng rng(3);
  std::vector<RegretCurve> many(100);
  for (auto& c : many) {
    for (int t = 0; t < 64; ++t) {
      c.des.push_back(1e3 * rng.uniform());
      c.ext.push_back(rng.normal());
    }
  }
  RunSummary big = aggregate(many);
  REQUIRE(big.des.size() == 7);
  for (const auto& ps : big.des) {
    double mean = 0.0;
    for (const auto& c : many) mean += c.des[ps.t - 1];
    mean /= 100;
    double ss = 0.0;
    for (const auto& c : many) ss += (c.des[ps.t - 1] - mean) * (c.des[ps.t - 1] - mean);
    CHECK(std::abs(ps.mean - mean) <= 1e-12 * std::max(1.0, mean));
    CHECK(std::abs(ps.std - std::sqrt(ss / 99)) <= 1e-12 * std::max(1.0, ps.std));
  }
}
