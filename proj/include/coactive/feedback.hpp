/// @file  feedback.hpp
/// @brief Simulated users producing preference feedback from hidden utility.
///
/// All acceptance decisions go through compute_slack so that a feedback
/// object accepted as alpha-informative records a slack of exactly zero,
/// bit for bit, when the same utility values are fed back in.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "coactive/ranking.hpp"
#include "coactive/rng.hpp"
#include "coactive/vector.hpp"

namespace coactive {

enum class UserModelKind {
  strict_alpha,
  noisy_relevance,
  rating_increment,
  expected_alpha,
};

struct UserModelConfig {
  UserModelKind kind = UserModelKind::strict_alpha;
  double alpha = 1.0;         // for the alpha-parameterized kinds, in (0, 1]
  double improve_prob = 1.0;  // expected_alpha only
  std::uint64_t rng_seed = 0;
};

/// One round's record. Utility values are visible to metrics only, never to
/// the learner. Objects are stored in a compact common encoding: a ranking
/// permutation, a single item id, or a single +/-1 prediction.
struct FeedbackEvent {
  int round = 0;
  int context_id = 0;
  std::vector<int> presented;
  std::vector<int> feedback;
  double u_presented = 0.0;
  double u_feedback = 0.0;
  double u_star = 0.0;
  double slack = 0.0;  // at the configured alpha
};

/// Violation of the strict alpha-informative condition:
///   max(0, alpha * (U(y*) - U(y)) - (U(ybar) - U(y))).
inline double compute_slack(double alpha, double u_star, double u_y, double u_ybar) {
  const double required = alpha * (u_star - u_y);
  const double achieved = u_ybar - u_y;
  return std::max(0.0, required - achieved);
}

/// Minimal-improvement strict-alpha choice over an enumerable candidate set:
/// the candidate of smallest utility whose improvement still covers the
/// alpha fraction of the gap to the best candidate. Returns the presented
/// index itself when the gap is already zero. Candidates with a null
/// availability mask are all admissible.
inline int strict_alpha_minimal_index(double alpha,
                                      const std::vector<double>& utilities,
                                      const std::vector<char>* available,
                                      int presented) {
  const auto admissible = [&](std::size_t j) {
    return available == nullptr || (*available)[j] != 0;
  };
  const double u_y = utilities[static_cast<std::size_t>(presented)];
  double u_star = u_y;
  for (std::size_t j = 0; j < utilities.size(); ++j) {
    if (admissible(j) && utilities[j] > u_star) u_star = utilities[j];
  }
  if (compute_slack(alpha, u_star, u_y, u_y) == 0.0) return presented;
  int best = -1;
  for (std::size_t j = 0; j < utilities.size(); ++j) {
    if (!admissible(j)) continue;
    if (compute_slack(alpha, u_star, u_y, utilities[j]) != 0.0) continue;
    if (best < 0 || utilities[j] < utilities[static_cast<std::size_t>(best)]) {
      best = static_cast<int>(j);
    }
  }
  return best;  // u_star itself satisfies, so best >= 0
}

/// Strict-alpha ranking feedback, mirroring a user who walks down the
/// presented list: for growing prefixes of the presented ranking, the best
/// (up to) five documents seen so far are promoted to the top, keeping the
/// order in which they were presented, and the scan stops at the first
/// prefix whose promotion satisfies the alpha condition. If no prefix
/// satisfies it (the presented order of even the five best documents may
/// score too low), the fallback promotes the overall best five in
/// descending true-score order, which attains the optimal utility.
inline Ranking strict_alpha_ranking_feedback(double alpha, const RankingTask& task,
                                             const std::vector<double>& true_scores,
                                             const RankingContext& ctx,
                                             const Ranking& presented) {
  const int n = static_cast<int>(ctx.docs.size());
  const int k = task.scored_positions(ctx);
  const double u_y = task.utility_from_scores(true_scores, presented, k);
  const Ranking optimal = RankingTask::argmax_scores(true_scores);
  const double u_star = task.utility_from_scores(true_scores, optimal, k);
  if (compute_slack(alpha, u_star, u_y, u_y) == 0.0) return presented;

  // Promoted set for the current prefix: the best k seen so far, kept
  // sorted by score descending with ties broken by earlier position.
  struct Pick {
    double score;
    int position;  // position in the presented list
  };
  const auto better = [](const Pick& a, const Pick& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.position < b.position;
  };
  const auto build = [&](const std::vector<Pick>& picks, bool by_position) {
    std::vector<int> positions;
    positions.reserve(picks.size());
    for (const Pick& pick : picks) positions.push_back(pick.position);
    if (by_position) std::sort(positions.begin(), positions.end());
    Ranking out;
    out.reserve(static_cast<std::size_t>(n));
    std::vector<char> promoted(static_cast<std::size_t>(n), 0);
    for (int p : positions) {
      promoted[static_cast<std::size_t>(p)] = 1;
      out.push_back(presented[static_cast<std::size_t>(p)]);
    }
    for (int q = 0; q < n; ++q) {
      if (!promoted[static_cast<std::size_t>(q)]) {
        out.push_back(presented[static_cast<std::size_t>(q)]);
      }
    }
    return out;
  };
  const auto prefix_utility = [&](const Ranking& y) {
    return task.utility_from_scores(true_scores, y, k);
  };

  std::vector<Pick> picks;
  picks.reserve(static_cast<std::size_t>(k));
  for (int p = 0; p < n; ++p) {
    const int doc = presented[static_cast<std::size_t>(p)];
    const Pick cand{true_scores[static_cast<std::size_t>(doc)], p};
    picks.insert(std::upper_bound(picks.begin(), picks.end(), cand, better), cand);
    if (static_cast<int>(picks.size()) > k) picks.pop_back();
    if (static_cast<int>(picks.size()) < k && p + 1 < n) continue;

    Ranking out = build(picks, /*by_position=*/true);
    if (compute_slack(alpha, u_star, u_y, prefix_utility(out)) == 0.0) return out;
  }
  // No prefix promotion sufficed in presented order; hand back the best
  // five in utility order, which reaches u_star exactly.
  Ranking out = build(picks, /*by_position=*/false);
  if (compute_slack(alpha, u_star, u_y, prefix_utility(out)) != 0.0) {
    throw std::logic_error("strict_alpha_ranking_feedback: fallback must satisfy");
  }
  return out;
}

/// Feedback from graded relevance labels: the user inspects the top
/// inspect_k positions (or the whole list if shorter) and moves the
/// promote_k highest-labeled inspected documents to the top in descending
/// label order, ties keeping their presented order. Everything else keeps
/// its relative order. May decrease true utility; that is the point.
inline Ranking noisy_relevance_feedback(const std::vector<int>& labels,
                                        const Ranking& presented,
                                        int inspect_k = 10, int promote_k = 5) {
  const int n = static_cast<int>(presented.size());
  const int m = std::min(inspect_k, n);
  std::vector<int> inspected(static_cast<std::size_t>(m));
  for (int p = 0; p < m; ++p) inspected[static_cast<std::size_t>(p)] = p;
  std::stable_sort(inspected.begin(), inspected.end(), [&](int a, int b) {
    return labels[static_cast<std::size_t>(presented[static_cast<std::size_t>(a)])] >
           labels[static_cast<std::size_t>(presented[static_cast<std::size_t>(b)])];
  });
  const int take = std::min(promote_k, m);
  std::vector<char> promoted(static_cast<std::size_t>(n), 0);
  Ranking out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < take; ++i) {
    const int p = inspected[static_cast<std::size_t>(i)];
    promoted[static_cast<std::size_t>(p)] = 1;
    out.push_back(presented[static_cast<std::size_t>(p)]);
  }
  for (int p = 0; p < n; ++p) {
    if (!promoted[static_cast<std::size_t>(p)]) {
      out.push_back(presented[static_cast<std::size_t>(p)]);
    }
  }
  return out;
}

/// Nearest allowed rating for an imputed score: round half away from zero,
/// clamp to the 1..5 scale.
inline int round_to_rating(double score) {
  const double r = std::round(score);
  return static_cast<int>(std::clamp(r, 1.0, 5.0));
}

/// Rating-increment feedback: the lowest-id available item rated exactly one
/// above the presented item. A top-rated presented item, or a missing rating
/// level, makes the user hand back the presented item unchanged.
inline int rating_increment_feedback(const std::vector<int>& ratings,
                                     const std::vector<char>& available,
                                     int presented) {
  const int r = ratings[static_cast<std::size_t>(presented)];
  if (r >= 5) return presented;
  const int target = r + 1;
  for (std::size_t j = 0; j < ratings.size(); ++j) {
    if (available[j] && ratings[j] == target) return static_cast<int>(j);
  }
  return presented;
}

/// Expected-alpha user, two-point mixture: with probability improve_prob the
/// user answers like the strict-alpha user, otherwise hands back the
/// presented object. Consumes exactly one draw either way.
inline bool expected_alpha_improves(double improve_prob, SplitMix64& rng) {
  return rng.next_unit() < improve_prob;
}

}  // namespace coactive
