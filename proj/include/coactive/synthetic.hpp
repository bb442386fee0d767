/// @file  synthetic.hpp
/// @brief Seeded synthetic data: ranking contexts with a planted utility
///        vector, and low-rank ratings matrices sampled at a given density.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "coactive/ranking.hpp"
#include "coactive/ratings.hpp"
#include "coactive/rng.hpp"
#include "coactive/vector.hpp"

namespace coactive {

struct SyntheticRankingConfig {
  int n_queries = 50;
  int n_docs = 20;
  int dim = 10;
  double label_noise = 0.25;
  std::uint64_t seed = 7;
};

struct SyntheticRankingData {
  std::vector<RankingContext> contexts;
  FeatureVector w_true;  // unit norm
};

namespace detail {

/// Uniform direction on the unit sphere via normalized Gaussians.
inline FeatureVector random_unit_vector(int dim, SplitMix64& rng) {
  FeatureVector v(static_cast<std::size_t>(dim));
  double n = 0.0;
  do {
    for (auto& x : v) x = rng.next_normal();
    n = norm(v);
  } while (n < 1e-12);
  for (auto& x : v) x /= n;
  return v;
}

}  // namespace detail

/// Documents are i.i.d. uniform on the unit sphere. Relevance labels
/// discretize the planted utility:
///   r = clamp(round(2 + 2 (w_true . x) + label_noise * N(0,1)), 0, 4),
/// so labels track w_true up to rounding and noise.
inline SyntheticRankingData make_synthetic_ranking(const SyntheticRankingConfig& cfg) {
  if (cfg.n_queries < 1 || cfg.n_docs < 1 || cfg.dim < 1) {
    throw std::invalid_argument("make_synthetic_ranking: sizes must be >= 1");
  }
  if (cfg.label_noise < 0.0) {
    throw std::invalid_argument("make_synthetic_ranking: label_noise must be >= 0");
  }
  SplitMix64 rng(cfg.seed);
  SyntheticRankingData data;
  data.w_true = detail::random_unit_vector(cfg.dim, rng);
  data.contexts.reserve(static_cast<std::size_t>(cfg.n_queries));
  for (int q = 0; q < cfg.n_queries; ++q) {
    RankingContext ctx;
    ctx.query_id = q + 1;
    ctx.docs.reserve(static_cast<std::size_t>(cfg.n_docs));
    ctx.labels.reserve(static_cast<std::size_t>(cfg.n_docs));
    for (int i = 0; i < cfg.n_docs; ++i) {
      FeatureVector x = detail::random_unit_vector(cfg.dim, rng);
      const double score = 2.0 + 2.0 * dot(data.w_true, x) +
                           cfg.label_noise * rng.next_normal();
      const int label =
          static_cast<int>(std::clamp(std::round(score), 0.0, 4.0));
      ctx.docs.push_back(std::move(x));
      ctx.labels.push_back(label);
    }
    data.contexts.push_back(std::move(ctx));
  }
  return data;
}

struct SyntheticRatingsConfig {
  int n_users = 60;
  int n_items = 3090;
  int rank = 8;
  double density = 0.30;
  double noise = 0.35;
  std::uint64_t seed = 11;
};

/// Ratings from planted low-rank factors:
///   r_ij = clamp(round(3 + 1.2 (u_i . m_j) + noise * N(0,1)), 1, 5),
/// with factor entries scaled so u_i . m_j has roughly unit variance.
/// Each (user, item) pair is observed independently with the given density.
inline std::vector<RatingsTriple> make_synthetic_ratings(
    const SyntheticRatingsConfig& cfg) {
  if (cfg.n_users < 1 || cfg.n_items < 1 || cfg.rank < 1) {
    throw std::invalid_argument("make_synthetic_ratings: sizes must be >= 1");
  }
  if (cfg.density <= 0.0 || cfg.density > 1.0) {
    throw std::invalid_argument("make_synthetic_ratings: density must be in (0, 1]");
  }
  if (cfg.noise < 0.0) {
    throw std::invalid_argument("make_synthetic_ratings: noise must be >= 0");
  }
  SplitMix64 rng(cfg.seed);
  const double scale = 1.0 / std::pow(static_cast<double>(cfg.rank), 0.25);
  const auto draw_factor = [&] {
    FeatureVector f(static_cast<std::size_t>(cfg.rank));
    for (auto& x : f) x = scale * rng.next_normal();
    return f;
  };
  std::vector<FeatureVector> users, items;
  users.reserve(static_cast<std::size_t>(cfg.n_users));
  items.reserve(static_cast<std::size_t>(cfg.n_items));
  for (int i = 0; i < cfg.n_users; ++i) users.push_back(draw_factor());
  for (int j = 0; j < cfg.n_items; ++j) items.push_back(draw_factor());

  std::vector<RatingsTriple> triples;
  for (int i = 0; i < cfg.n_users; ++i) {
    for (int j = 0; j < cfg.n_items; ++j) {
      const double keep = rng.next_unit();
      const double value = 3.0 +
                           1.2 * dot(users[static_cast<std::size_t>(i)],
                                     items[static_cast<std::size_t>(j)]) +
                           cfg.noise * rng.next_normal();
      if (keep >= cfg.density) continue;
      RatingsTriple t;
      t.user = i + 1;
      t.item = j + 1;
      t.rating = static_cast<int>(std::clamp(std::round(value), 1.0, 5.0));
      triples.push_back(t);
    }
  }
  if (triples.empty()) {
    throw std::runtime_error("make_synthetic_ratings: density left no observations");
  }
  return triples;
}

}  // namespace coactive
