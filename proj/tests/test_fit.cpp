#include "coactive/fit.hpp"

#include "coactive/rng.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

using namespace coactive;

namespace {

// Independent normal-equations oracle: builds X'X + lambda I and X'y by
// hand and solves with Gaussian elimination and partial pivoting. Shares no
// code with the implementation under test.
FeatureVector normal_equations_oracle(const std::vector<FeatureVector>& xs,
                                      const std::vector<double>& ys,
                                      double lambda) {
  const std::size_t d = xs[0].size();
  std::vector<std::vector<double>> a(d, std::vector<double>(d + 1, 0.0));
  for (std::size_t r = 0; r < xs.size(); ++r) {
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) a[i][j] += xs[r][i] * xs[r][j];
      a[i][d] += xs[r][i] * ys[r];
    }
  }
  for (std::size_t i = 0; i < d; ++i) a[i][i] += lambda;

  for (std::size_t col = 0; col < d; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < d; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    }
    std::swap(a[col], a[pivot]);
    for (std::size_t r = 0; r < d; ++r) {
      if (r == col || a[r][col] == 0.0) continue;
      const double f = a[r][col] / a[col][col];
      for (std::size_t c = col; c <= d; ++c) a[r][c] -= f * a[col][c];
    }
  }
  FeatureVector w(d);
  for (std::size_t i = 0; i < d; ++i) w[i] = a[i][d] / a[i][i];
  return w;
}

}  // namespace

TEST_CASE("least squares recovers an exactly consistent system at lambda=0") {
  std::vector<FeatureVector> xs = {{1.0}, {2.0}};
  std::vector<double> ys = {1.0, 2.0};
  FeatureVector w = fit_least_squares(xs, ys, 0.0);
  REQUIRE(w.size() == 1);
  REQUIRE(w[0] == Catch::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("least squares returns zero weights for all-zero targets") {
  std::vector<FeatureVector> xs = {{1.0, 2.0}, {3.0, -1.0}, {0.5, 0.5}};
  std::vector<double> ys = {0.0, 0.0, 0.0};
  FeatureVector w = fit_least_squares(xs, ys, 1e-6);
  REQUIRE(std::abs(w[0]) < 1e-12);
  REQUIRE(std::abs(w[1]) < 1e-12);
}

TEST_CASE("least squares matches a direct normal-equations oracle to 1e-8") {
  SplitMix64 rng(12);
  std::vector<FeatureVector> xs;
  std::vector<double> ys;
  for (int r = 0; r < 20; ++r) {
    FeatureVector x(5);
    for (double& v : x) v = rng.next_normal();
    xs.push_back(x);
    ys.push_back(rng.next_normal());
  }
  for (double lambda : {0.0, 1e-6, 0.5}) {
    FeatureVector w = fit_least_squares(xs, ys, lambda);
    FeatureVector oracle = normal_equations_oracle(xs, ys, lambda);
    for (std::size_t i = 0; i < 5; ++i) {
      REQUIRE(w[i] == Catch::Approx(oracle[i]).margin(1e-8));
    }
  }
}

TEST_CASE("degenerate system at lambda=0 raises an instructive error") {
  // Second column is twice the first: rank deficient.
  std::vector<FeatureVector> xs = {{1.0, 2.0}, {2.0, 4.0}, {3.0, 6.0}};
  std::vector<double> ys = {1.0, 2.0, 3.0};
  REQUIRE_THROWS_WITH(fit_least_squares(xs, ys, 0.0),
                      Catch::Matchers::ContainsSubstring("ridge"));
  // The same system solves fine with a positive ridge.
  REQUIRE_NOTHROW(fit_least_squares(xs, ys, 1e-6));
}

TEST_CASE("least squares rejects empty and ragged inputs") {
  REQUIRE_THROWS_AS(fit_least_squares({}, {}, 0.0), std::invalid_argument);
  std::vector<FeatureVector> ragged = {{1.0, 2.0}, {1.0}};
  REQUIRE_THROWS_AS(fit_least_squares(ragged, {1.0, 2.0}, 0.0), std::exception);
  REQUIRE_THROWS_AS(fit_least_squares({{1.0}}, {1.0}, -0.5), std::invalid_argument);
}

TEST_CASE("factorization reconstructs an exact rank-1 matrix") {
  std::vector<RatingsTriple> triples = {
      {1, 10, 1, -1}, {1, 20, 2, -1}, {2, 10, 2, -1}, {2, 20, 4, -1}};
  RatingsFactorization f = factorize_ratings(triples, 1, 0.0, 30, 5);
  for (const RatingsTriple& t : triples) {
    const double pred = f.predict(f.user_index.at(t.user), f.item_index.at(t.item));
    REQUIRE(pred == Catch::Approx(static_cast<double>(t.rating)).margin(1e-9));
  }
}

TEST_CASE("large regularization shrinks the factors toward zero") {
  std::vector<RatingsTriple> triples = {
      {1, 10, 5, -1}, {1, 20, 4, -1}, {2, 10, 3, -1}, {2, 20, 5, -1}};
  RatingsFactorization small = factorize_ratings(triples, 2, 0.01, 20, 5);
  RatingsFactorization large = factorize_ratings(triples, 2, 1e6, 20, 5);
  double small_norm = 0.0, large_norm = 0.0;
  for (const auto& u : small.user_factors) small_norm += squared_norm(u);
  for (const auto& u : large.user_factors) large_norm += squared_norm(u);
  REQUIRE(large_norm < 1e-6);
  REQUIRE(small_norm > 1e-3);
}

TEST_CASE("factorization recovers a planted rank-3 matrix to observed RMSE < 1e-3") {
  // Ratings must be integers in 1..5, so the planted rank-3 matrix is built
  // from three integer item profiles with each user copying one profile:
  // the matrix rows span at most three directions.
  const int n_users = 15, n_items = 12, rank = 3;
  std::vector<RatingsTriple> triples;
  std::vector<std::vector<int>> profile = {
      {1, 2, 3, 4, 5, 1, 2, 3, 4, 5, 1, 2},
      {5, 4, 3, 2, 1, 5, 4, 3, 2, 1, 5, 4},
      {2, 2, 4, 4, 2, 2, 4, 4, 2, 2, 4, 4}};
  for (int i = 0; i < n_users; ++i) {
    for (int j = 0; j < n_items; ++j) {
      const int r = profile[static_cast<std::size_t>(i % 3)][static_cast<std::size_t>(j)];
      triples.push_back({i + 1, j + 1, r, -1});
    }
  }
  RatingsFactorization f = factorize_ratings(triples, rank, 1e-9, 60, 9);
  double sq = 0.0;
  for (const RatingsTriple& t : triples) {
    const double pred = f.predict(f.user_index.at(t.user), f.item_index.at(t.item));
    const double err = pred - static_cast<double>(t.rating);
    sq += err * err;
  }
  const double rmse = std::sqrt(sq / static_cast<double>(triples.size()));
  REQUIRE(rmse < 1e-3);
}

TEST_CASE("factorization is deterministic in the seed and sensitive to it") {
  std::vector<RatingsTriple> triples = {
      {1, 10, 5, -1}, {1, 20, 4, -1}, {2, 10, 3, -1}, {2, 30, 5, -1},
      {3, 20, 2, -1}, {3, 30, 1, -1}};
  RatingsFactorization a = factorize_ratings(triples, 2, 0.1, 10, 42);
  RatingsFactorization b = factorize_ratings(triples, 2, 0.1, 10, 42);
  REQUIRE(a.user_factors == b.user_factors);
  REQUIRE(a.item_factors == b.item_factors);

  RatingsFactorization c = factorize_ratings(triples, 2, 0.1, 10, 43);
  REQUIRE(a.user_factors != c.user_factors);
}

TEST_CASE("factorization indexes users and items by first appearance") {
  std::vector<RatingsTriple> triples = {
      {7, 30, 3, -1}, {2, 10, 4, -1}, {7, 10, 2, -1}};
  RatingsFactorization f = factorize_ratings(triples, 1, 0.1, 5, 1);
  REQUIRE(f.user_index.at(7) == 0);
  REQUIRE(f.user_index.at(2) == 1);
  REQUIRE(f.item_index.at(30) == 0);
  REQUIRE(f.item_index.at(10) == 1);
  REQUIRE(f.user_factors.size() == 2);
  REQUIRE(f.item_factors.size() == 2);
}

TEST_CASE("factorization rejects invalid arguments") {
  std::vector<RatingsTriple> one = {{1, 1, 3, -1}};
  REQUIRE_THROWS_AS(factorize_ratings({}, 1, 0.1, 5, 1), std::invalid_argument);
  REQUIRE_THROWS_AS(factorize_ratings(one, 0, 0.1, 5, 1), std::invalid_argument);
  REQUIRE_THROWS_AS(factorize_ratings(one, 1, -0.1, 5, 1), std::invalid_argument);
  REQUIRE_THROWS_AS(factorize_ratings(one, 1, 0.1, 0, 1), std::invalid_argument);
}
