#include "coactive/metrics.hpp"

#include "coactive/ranking.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numeric>
#include <vector>

using namespace coactive;

TEST_CASE("regret_step is the clamped utility shortfall") {
  REQUIRE(regret_step(5.0, 5.0) == 0.0);
  REQUIRE(regret_step(5.0, 3.0) == 2.0);
}

TEST_CASE("ranking regret example: one transposition under w = [1, 0]") {
  RankingTask task(2, 1.0);
  RankingContext ctx;
  ctx.docs = {{1.0, 0.0}, {0.0, 1.0}};
  FeatureVector w_star = {1.0, 0.0};
  std::vector<double> scores = task.document_scores(w_star, ctx);
  const int k = task.scored_positions(ctx);
  const double u_opt = task.utility_from_scores(scores, {0, 1}, k);
  const double u_swapped = task.utility_from_scores(scores, {1, 0}, k);
  REQUIRE(u_opt - u_swapped == Catch::Approx(1.0 - 1.0 / std::log2(3.0)).epsilon(1e-12));
  REQUIRE(u_opt - u_swapped == Catch::Approx(0.3691).margin(5e-5));
}

TEST_CASE("theorem 1 bound evaluates its closed form") {
  // Independent arithmetic: slack/(a T) + 2 R |w*| / (a sqrt(T)).
  REQUIRE(theorem1_bound(1.0, 0.0, 1.0, 1.0, 400.0) == Catch::Approx(0.1).epsilon(1e-15));
  const double base = theorem1_bound(1.0, 3.0, 2.0, 0.5, 1000.0);
  const double oracle = 3.0 / 1000.0 + 2.0 * 2.0 * 0.5 / std::sqrt(1000.0);
  REQUIRE(base == Catch::Approx(oracle).epsilon(1e-15));
  // 1/alpha scaling at equal slacks.
  REQUIRE(theorem1_bound(0.1, 0.0, 1.0, 1.0, 400.0) ==
          Catch::Approx(10.0 * theorem1_bound(1.0, 0.0, 1.0, 1.0, 400.0)).epsilon(1e-12));
}

TEST_CASE("corollary 1 bound is the same form over expected slacks") {
  REQUIRE(corollary1_bound(0.5, 2.0, 1.5, 1.0, 250.0) ==
          Catch::Approx(theorem1_bound(0.5, 2.0, 1.5, 1.0, 250.0)).epsilon(1e-15));
}

TEST_CASE("batch bound carries the sqrt(k) factor on the constant term") {
  const double plain = theorem1_bound(1.0, 0.0, 1.0, 1.0, 400.0);
  REQUIRE(batch_bound(1.0, 0.0, 1.0, 1.0, 4, 400.0) ==
          Catch::Approx(2.0 * plain).epsilon(1e-12));
  REQUIRE(batch_bound(1.0, 0.0, 1.0, 1.0, 1, 400.0) ==
          Catch::Approx(plain).epsilon(1e-15));
  // Slack term is unaffected by k.
  const double with_slack = batch_bound(0.5, 7.0, 1.0, 1.0, 9, 100.0);
  const double oracle = 7.0 / (0.5 * 100.0) + 2.0 * 1.0 * 1.0 * 3.0 / (0.5 * 10.0);
  REQUIRE(with_slack == Catch::Approx(oracle).epsilon(1e-15));
}

TEST_CASE("theorem 2 bound matches its termwise evaluation") {
  // G=1, diameter 2, R=1, T=1e4, zero slack and zero baseline:
  // 2/(2*100) + 2/1e4 + 4/100 = 0.0502.
  REQUIRE(theorem2_bound(1.0, 0.0, 1.0, 2.0, 1.0, 1e4, 0.0) ==
          Catch::Approx(0.0502).epsilon(1e-12));
  // Termwise oracle with every argument nontrivial.
  const double alpha = 0.4, slack = 5.0, g = 2.0, diam = 3.0, r = 1.5, t = 900.0,
               baseline = 18.0;
  const double oracle = baseline / t + 2.0 * g * slack / (alpha * t) +
                        (1.0 / alpha) * (diam * g / (2.0 * std::sqrt(t)) +
                                         diam * g / t +
                                         4.0 * r * r * g / std::sqrt(t));
  REQUIRE(theorem2_bound(alpha, slack, g, diam, r, t, baseline) ==
          Catch::Approx(oracle).epsilon(1e-15));
}

TEST_CASE("theorem 2 bound tends to the baseline average as T grows") {
  const double baseline_per_round = 0.25;
  double prev_gap = 1e300;
  for (double t : {1e2, 1e4, 1e6, 1e8}) {
    const double b = theorem2_bound(1.0, 0.0, 1.0, 2.0, 1.0, t, baseline_per_round * t);
    const double gap = b - baseline_per_round;
    REQUIRE(gap > 0.0);
    REQUIRE(gap < prev_gap);
    prev_gap = gap;
  }
  REQUIRE(prev_gap < 1e-3);
}

TEST_CASE("alpha-scaled theorem 2 terms double when alpha halves") {
  const double hi = theorem2_bound(1.0, 3.0, 1.0, 2.0, 1.0, 400.0, 0.0);
  const double lo = theorem2_bound(0.5, 3.0, 1.0, 2.0, 1.0, 400.0, 0.0);
  REQUIRE(lo == Catch::Approx(2.0 * hi).epsilon(1e-12));
}

TEST_CASE("dcg at k follows the discounted sum") {
  REQUIRE(dcg_at_k({5, 0, 0}, {0, 1, 2}, 10) == 5.0);
  REQUIRE(dcg_at_k({0, 0, 0, 0}, {3, 2, 1, 0}, 10) == 0.0);
  REQUIRE(dcg_at_k({3, 2}, {0, 1}, 2) ==
          Catch::Approx(3.0 + 2.0 / std::log2(3.0)).epsilon(1e-12));
  REQUIRE(dcg_at_k({3, 2}, {0, 1}, 2) == Catch::Approx(4.2619).margin(5e-5));
  // k truncates; a shorter ranking truncates too.
  REQUIRE(dcg_at_k({1, 1, 1}, {0, 1, 2}, 1) == 1.0);
  REQUIRE(dcg_at_k({4, 4, 4}, {2}, 10) == 4.0);
}

TEST_CASE("convex loss instances expose value and subgradient bound") {
  ConvexLoss hinge = hinge_loss();
  REQUIRE(hinge.value(1.0) == 0.0);
  REQUIRE(hinge.value(0.0) == 0.0);
  REQUIRE(hinge.value(-2.0) == 2.0);
  REQUIRE(hinge.subgradient_bound_g == 1.0);

  ConvexLoss logistic = logistic_loss();
  REQUIRE(logistic.value(0.0) == Catch::Approx(std::log(2.0)).epsilon(1e-15));
  // Non-increasing in theta; values stay positive.
  double prev = logistic.value(-3.0);
  for (double theta : {-1.0, 0.0, 1.0, 3.0}) {
    const double v = logistic.value(theta);
    REQUIRE(v > 0.0);
    REQUIRE(v < prev);
    prev = v;
  }
  REQUIRE(logistic.subgradient_bound_g == 1.0);
}

TEST_CASE("least_squares_slope recovers a planted line exactly") {
  std::vector<double> xs, ys;
  for (int i = 1; i <= 30; ++i) {
    const double x = 0.3 * i;
    xs.push_back(x);
    ys.push_back(-0.5 * x + 2.0);
  }
  REQUIRE(least_squares_slope(xs, ys) == Catch::Approx(-0.5).epsilon(1e-12));
  // Oracle on noisy data: compare against the direct covariance formula.
  std::vector<double> nx = {1.0, 2.0, 4.0, 7.0};
  std::vector<double> ny = {0.5, 0.1, -0.3, 0.9};
  double mx = std::accumulate(nx.begin(), nx.end(), 0.0) / 4.0;
  double my = std::accumulate(ny.begin(), ny.end(), 0.0) / 4.0;
  double cov = 0.0, var = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    cov += (nx[i] - mx) * (ny[i] - my);
    var += (nx[i] - mx) * (nx[i] - mx);
  }
  REQUIRE(least_squares_slope(nx, ny) == Catch::Approx(cov / var).epsilon(1e-12));
}

TEST_CASE("bound spec selects the right bound family") {
  BoundSpec t1;
  t1.kind = BoundSpec::Kind::theorem1;
  t1.alpha = 0.5;
  REQUIRE(t1.evaluate(2.0, 1.0, 1.0, 400.0) ==
          Catch::Approx(theorem1_bound(0.5, 2.0, 1.0, 1.0, 400.0)).epsilon(1e-15));

  BoundSpec bk;
  bk.kind = BoundSpec::Kind::batch;
  bk.alpha = 1.0;
  bk.batch_k = 16;
  REQUIRE(bk.evaluate(0.0, 1.0, 1.0, 400.0) ==
          Catch::Approx(batch_bound(1.0, 0.0, 1.0, 1.0, 16, 400.0)).epsilon(1e-15));

  BoundSpec t2;
  t2.kind = BoundSpec::Kind::theorem2;
  t2.alpha = 1.0;
  t2.g_bound = 1.0;
  t2.ball_diameter = 2.0;
  t2.baseline_per_round = 0.0;
  REQUIRE(t2.evaluate(0.0, 1.0, 1.0, 1e4) == Catch::Approx(0.0502).epsilon(1e-12));
}

TEST_CASE("regret trace keeps exact cumulative arithmetic") {
  BoundSpec spec;
  spec.kind = BoundSpec::Kind::theorem1;
  spec.alpha = 1.0;
  RegretTrace trace({0.5, 1.0}, spec, 1.0, 1.0);
  std::vector<double> insts = {0.5, 0.0, 1.25, 0.25};
  double cum = 0.0;
  for (int t = 1; t <= 4; ++t) {
    const double inst = insts[static_cast<std::size_t>(t - 1)];
    cum += inst;
    trace.record(t, inst, 0.0, {0.0, 0.0}, 0.0);
    const RegretTrace::Row& row = trace.rows().back();
    REQUIRE(row.round == t);
    REQUIRE(row.regret_cum == cum);
    REQUIRE(row.regret_avg == cum / t);
    REQUIRE(row.bound_theorem1 ==
            Catch::Approx(theorem1_bound(1.0, 0.0, 1.0, 1.0, t)).epsilon(1e-15));
  }
  REQUIRE(trace.average_regret_at(2) == Catch::Approx(0.25).epsilon(1e-15));
  REQUIRE(trace.average_regret_at(4) == Catch::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("regret trace accumulates per-alpha slack sums") {
  BoundSpec spec;
  spec.kind = BoundSpec::Kind::theorem1;
  spec.alpha = 1.0;
  RegretTrace trace({0.1, 1.0}, spec, 1.0, 1.0);
  trace.record(1, 0.0, 0.0, {0.25, 1.0}, 1.0);
  trace.record(2, 0.0, 0.0, {0.5, 0.5}, 0.5);
  REQUIRE(trace.rows()[0].slack_sums == std::vector<double>{0.25, 1.0});
  REQUIRE(trace.rows()[1].slack_sums == std::vector<double>{0.75, 1.5});
}
