/// @file  items.hpp
/// @brief Atomic item recommendation task with a shrinking candidate pool.

#pragma once

#include <stdexcept>
#include <vector>

#include "coactive/vector.hpp"

namespace coactive {

/// Candidate items with their feature vectors. The availability mask shrinks
/// over a run: the presented and feedback items of each round are consumed.
struct ItemContext {
  std::vector<FeatureVector> item_features;  // indexed by item id
  std::vector<char> available;

  std::size_t size() const { return item_features.size(); }

  int available_count() const {
    int n = 0;
    for (char a : available) n += (a != 0);
    return n;
  }
};

inline ItemContext make_item_context(std::vector<FeatureVector> features) {
  ItemContext ctx;
  ctx.available.assign(features.size(), 1);
  ctx.item_features = std::move(features);
  return ctx;
}

/// Item recommendation task. phi(ctx, j) = m_j; the declared norm bound is
/// the max item feature norm, promised by the pool builder.
class ItemTask {
 public:
  using Context = ItemContext;
  using Object = int;  // item id

  ItemTask(std::size_t dim, double max_item_norm)
      : dim_(dim), max_item_norm_(max_item_norm) {
    if (max_item_norm <= 0.0) {
      throw std::invalid_argument("ItemTask: max_item_norm must be positive");
    }
  }

  FeatureMapSpec map_spec() const { return {dim_, max_item_norm_}; }

  FeatureVector features(const Context& ctx, int item) const {
    return ctx.item_features.at(static_cast<std::size_t>(item));
  }

  /// Available item maximizing w . m_j, lowest id on ties.
  int argmax(const FeatureVector& w, const Context& ctx) const {
    int best = -1;
    double best_score = 0.0;
    for (std::size_t j = 0; j < ctx.size(); ++j) {
      if (!ctx.available[j]) continue;
      const double s = dot(w, ctx.item_features[j]);
      if (best < 0 || s > best_score) {
        best = static_cast<int>(j);
        best_score = s;
      }
    }
    if (best < 0) throw std::runtime_error("ItemTask::argmax: no available items");
    return best;
  }

  /// Same argmax over precomputed per-item scores.
  static int argmax_scores(const std::vector<double>& scores, const Context& ctx) {
    int best = -1;
    double best_score = 0.0;
    for (std::size_t j = 0; j < ctx.size(); ++j) {
      if (!ctx.available[j]) continue;
      if (best < 0 || scores[j] > best_score) {
        best = static_cast<int>(j);
        best_score = scores[j];
      }
    }
    if (best < 0) throw std::runtime_error("ItemTask::argmax: no available items");
    return best;
  }

  /// Removal protocol: the presented item and the feedback item leave the
  /// candidate pool after the round.
  static void consume(Context& ctx, int presented, int feedback) {
    ctx.available.at(static_cast<std::size_t>(presented)) = 0;
    ctx.available.at(static_cast<std::size_t>(feedback)) = 0;
  }

 private:
  std::size_t dim_;
  double max_item_norm_;
};

}  // namespace coactive
