/// @file  ranking.hpp
/// @brief Top-k ranking task: position-discounted joint feature map and the
///        sort-based argmax.

#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "coactive/vector.hpp"

namespace coactive {

/// One query with its candidate documents. Relevance labels are optional
/// (empty when the user model does not need them) and range over 0..4.
struct RankingContext {
  int query_id = 0;
  std::vector<FeatureVector> docs;
  std::vector<int> labels;
};

/// A full ordering of the document indices of one context. Position 0 is the
/// top of the list; entries are distinct 0-based document indices.
using Ranking = std::vector<int>;

/// Position discount 1/log2(position + 2) for 0-based positions.
inline double position_discount(int position) {
  return 1.0 / std::log2(static_cast<double>(position) + 2.0);
}

/// Sum of the first k position discounts.
inline double discount_sum(int k) {
  double s = 0.0;
  for (int i = 0; i < k; ++i) s += position_discount(i);
  return s;
}

/// Ranking task with a discounted top-k feature map:
///   phi(q, y) = sum_{i<min(k, n_docs)} docs[y_i] * discount(i).
///
/// The declared norm bound is discount_sum(k) * max_doc_norm, where
/// max_doc_norm is promised by whoever built the contexts (synthetic data
/// normalizes documents to the unit sphere; file ingestion scans the data).
class RankingTask {
 public:
  using Context = RankingContext;
  using Object = Ranking;

  RankingTask(std::size_t dim, double max_doc_norm, int top_k = 5)
      : dim_(dim), max_doc_norm_(max_doc_norm), top_k_(top_k) {
    if (top_k < 1) throw std::invalid_argument("RankingTask: top_k must be >= 1");
    if (max_doc_norm <= 0.0) {
      throw std::invalid_argument("RankingTask: max_doc_norm must be positive");
    }
  }

  int top_k() const { return top_k_; }

  FeatureMapSpec map_spec() const {
    return {dim_, discount_sum(top_k_) * max_doc_norm_};
  }

  /// Number of scored positions for a context: min(top_k, #docs).
  int scored_positions(const Context& ctx) const {
    return std::min<int>(top_k_, static_cast<int>(ctx.docs.size()));
  }

  FeatureVector features(const Context& ctx, const Ranking& y) const {
    const int k = scored_positions(ctx);
    validate_prefix(ctx, y, k);
    FeatureVector phi = zeros(dim_);
    for (int i = 0; i < k; ++i) {
      add_scaled(phi, position_discount(i), ctx.docs[static_cast<std::size_t>(y[i])]);
    }
    return phi;
  }

  /// Presents the utility-maximizing ranking for weights w: documents sorted
  /// by w . x descending, ties broken by lowest document index. The full
  /// sorted order is returned; only the top-k positions carry utility.
  Ranking argmax(const FeatureVector& w, const Context& ctx) const {
    if (ctx.docs.empty()) throw std::invalid_argument("RankingTask::argmax: no documents");
    return argmax_scores(document_scores(w, ctx));
  }

  /// Per-document scores w . x_i for one context.
  std::vector<double> document_scores(const FeatureVector& w, const Context& ctx) const {
    std::vector<double> scores(ctx.docs.size());
    for (std::size_t i = 0; i < ctx.docs.size(); ++i) scores[i] = dot(w, ctx.docs[i]);
    return scores;
  }

  /// Same argmax given precomputed per-document scores.
  static Ranking argmax_scores(const std::vector<double>& scores) {
    if (scores.empty()) throw std::invalid_argument("RankingTask::argmax: no documents");
    Ranking order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return scores[static_cast<std::size_t>(a)] > scores[static_cast<std::size_t>(b)];
    });
    return order;
  }

  /// Utility of a ranking given precomputed per-document scores. Equals
  /// dot(w, features(ctx, y)) up to float reassociation; every consumer in
  /// one run must stick to one of the two routes.
  double utility_from_scores(const std::vector<double>& scores, const Ranking& y,
                             int scored_k) const {
    const int k = std::min<int>(scored_k, static_cast<int>(y.size()));
    double u = 0.0;
    for (int i = 0; i < k; ++i) {
      u += scores[static_cast<std::size_t>(y[i])] * position_discount(i);
    }
    return u;
  }

 private:
  void validate_prefix(const Context& ctx, const Ranking& y, int k) const {
    if (static_cast<int>(y.size()) < k) {
      throw std::invalid_argument("RankingTask: ranking shorter than scored prefix");
    }
    std::vector<char> seen(ctx.docs.size(), 0);
    for (int idx : y) {
      if (idx < 0 || idx >= static_cast<int>(ctx.docs.size())) {
        throw std::invalid_argument("RankingTask: document index out of range");
      }
      if (seen[static_cast<std::size_t>(idx)]) {
        throw std::invalid_argument("RankingTask: repeated document index");
      }
      seen[static_cast<std::size_t>(idx)] = 1;
    }
  }

  std::size_t dim_;
  double max_doc_norm_;
  int top_k_;
};

}  // namespace coactive
