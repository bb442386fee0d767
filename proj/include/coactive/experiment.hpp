/// @file  experiment.hpp
/// @brief Multi-seed experiment execution: data preparation, the
///        observe/present/feedback/update loop per task, always-on runtime
///        invariant checks, aggregation, and CSV trace export.

#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "coactive/adversary.hpp"
#include "coactive/config.hpp"
#include "coactive/feedback.hpp"
#include "coactive/fit.hpp"
#include "coactive/items.hpp"
#include "coactive/learner.hpp"
#include "coactive/metrics.hpp"
#include "coactive/ranking.hpp"
#include "coactive/ratings.hpp"
#include "coactive/rng.hpp"
#include "coactive/svmlight.hpp"
#include "coactive/synthetic.hpp"
#include "coactive/vector.hpp"

namespace coactive {

using EventHook = std::function<void(const FeedbackEvent&)>;

/// One seed's complete record. The diagnostics back the structural
/// invariants: max_update_alignment is the largest value of
/// w_t . (phi(ybar_t) - phi(y_t)) seen (never meaningfully positive, since
/// y_t maximizes w_t . phi), and max_strict_slack is the largest recorded
/// slack at the configured alpha under a strict user (exactly zero).
struct RunResult {
  std::uint64_t seed = 0;
  RegretTrace trace;
  double w_star_norm = 0.0;
  double norm_bound_r = 0.0;
  int update_count = 0;
  long unchanged_feedback_rounds = 0;
  double max_update_alignment = -std::numeric_limits<double>::infinity();
  double max_strict_slack = 0.0;
  int final_available_count = -1;  // items task only
  FeatureVector final_w;
  bool aborted = false;
  std::string error;
};

struct AggregateTrace {
  std::vector<int> rounds;
  std::vector<double> regret_avg_mean;
  std::vector<double> regret_avg_stderr;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<RunResult> runs;
  AggregateTrace aggregate;
};

namespace detail {

constexpr double kCheckTol = 1e-9;

/// Prepared ranking data shared across seeds: contexts, the hidden utility
/// vector, and per-query truths precomputed along the score route used by
/// every consumer.
struct RankingDataset {
  std::vector<RankingContext> contexts;
  FeatureVector w_star;
  double max_doc_norm = 0.0;
  std::size_t dim = 0;
  std::vector<std::vector<double>> true_scores;  // per query, per document
  std::vector<Ranking> optimal;
  std::vector<double> u_star;
};

inline RankingDataset prepare_ranking_data(const ExperimentConfig& cfg) {
  RankingDataset data;
  FeatureVector planted;
  if (!cfg.ranking_data_path.empty()) {
    std::ifstream in(cfg.ranking_data_path);
    if (!in) {
      throw std::runtime_error("cannot open ranking data: " + cfg.ranking_data_path);
    }
    data.contexts = parse_svmlight_ranking(in);
    if (data.contexts.empty()) {
      throw std::runtime_error("ranking data has no queries: " + cfg.ranking_data_path);
    }
  } else {
    SyntheticRankingConfig scfg;
    scfg.n_queries = cfg.n_queries;
    scfg.n_docs = cfg.n_docs;
    scfg.dim = cfg.dim;
    scfg.label_noise = cfg.label_noise;
    scfg.seed = cfg.data_seed;
    SyntheticRankingData synth = make_synthetic_ranking(scfg);
    data.contexts = std::move(synth.contexts);
    planted = std::move(synth.w_true);
  }
  data.dim = data.contexts.front().docs.front().size();

  for (const RankingContext& ctx : data.contexts) {
    for (const FeatureVector& x : ctx.docs) {
      data.max_doc_norm = std::max(data.max_doc_norm, norm(x));
    }
  }

  // The hidden utility vector: the planted one when the data is synthetic
  // and feedback follows true utility; the least-squares fit to the labels
  // when feedback is label-driven or the data came from a file.
  const bool label_truth =
      planted.empty() || cfg.user == UserModelKind::noisy_relevance;
  if (label_truth) {
    std::vector<FeatureVector> xs;
    std::vector<double> rs;
    for (const RankingContext& ctx : data.contexts) {
      for (std::size_t i = 0; i < ctx.docs.size(); ++i) {
        xs.push_back(ctx.docs[i]);
        rs.push_back(static_cast<double>(ctx.labels[i]));
      }
    }
    data.w_star = fit_least_squares(xs, rs, cfg.ridge_lambda);
  } else {
    data.w_star = planted;
  }

  RankingTask task(data.dim, data.max_doc_norm);
  for (const RankingContext& ctx : data.contexts) {
    std::vector<double> scores = task.document_scores(data.w_star, ctx);
    Ranking best = RankingTask::argmax_scores(scores);
    const double u = task.utility_from_scores(scores, best, task.scored_positions(ctx));
    data.true_scores.push_back(std::move(scores));
    data.optimal.push_back(std::move(best));
    data.u_star.push_back(u);
  }
  return data;
}

/// Prepared item data shared across seeds: item factors as features, user
/// factors as per-user hidden utility vectors, and observed ratings.
struct ItemDataset {
  std::vector<FeatureVector> item_factors;
  std::vector<FeatureVector> user_factors;
  std::vector<std::map<int, int>> observed;  // dense user -> (dense item -> rating)
  double max_item_norm = 0.0;
  std::size_t dim = 0;
};

inline ItemDataset prepare_item_data(const ExperimentConfig& cfg) {
  std::vector<RatingsTriple> triples;
  if (!cfg.ratings_path.empty()) {
    std::ifstream in(cfg.ratings_path);
    if (!in) throw std::runtime_error("cannot open ratings: " + cfg.ratings_path);
    triples = parse_ratings(in, cfg.ratings_delim, nullptr);
    if (triples.empty()) {
      throw std::runtime_error("ratings file has no triples: " + cfg.ratings_path);
    }
  } else {
    SyntheticRatingsConfig scfg;
    scfg.n_users = cfg.n_users;
    scfg.n_items = cfg.n_items;
    scfg.rank = cfg.gen_rank;
    scfg.density = cfg.density;
    scfg.noise = cfg.ratings_noise;
    scfg.seed = cfg.data_seed;
    triples = make_synthetic_ratings(scfg);
  }

  RatingsFactorization fact = factorize_ratings(triples, cfg.als_rank, cfg.als_reg,
                                                cfg.als_iters, cfg.data_seed);
  ItemDataset data;
  data.dim = static_cast<std::size_t>(cfg.als_rank);
  data.item_factors = std::move(fact.item_factors);
  data.user_factors = std::move(fact.user_factors);
  data.observed.resize(data.user_factors.size());
  for (const RatingsTriple& t : triples) {
    const int u = fact.user_index.at(t.user);
    const int j = fact.item_index.at(t.item);
    data.observed[static_cast<std::size_t>(u)][j] = t.rating;
  }
  for (const FeatureVector& m : data.item_factors) {
    data.max_item_norm = std::max(data.max_item_norm, norm(m));
  }
  if (static_cast<long>(data.item_factors.size()) < 2 * cfg.rounds) {
    throw std::runtime_error(
        "items task: catalogue smaller than 2*T; shorten T or add items");
  }
  return data;
}

inline void check(bool ok, const char* what) {
  if (!ok) throw std::runtime_error(std::string("runtime invariant violated: ") + what);
}

inline BoundSpec bound_spec_for(const ExperimentConfig& cfg) {
  BoundSpec spec;
  spec.alpha = cfg.alpha;
  switch (cfg.learner) {
    case LearnerKind::perceptron:
      spec.kind = BoundSpec::Kind::theorem1;
      break;
    case LearnerKind::batch:
      spec.kind = BoundSpec::Kind::batch;
      spec.batch_k = cfg.batch_k;
      break;
    case LearnerKind::convex:
      spec.kind = BoundSpec::Kind::theorem2;
      spec.g_bound = cfg.convex_g;
      spec.ball_diameter = 2.0 * cfg.convex_rho;
      spec.baseline_per_round = 0.0;  // hinge instance: c(0) = 0
      break;
  }
  return spec;
}

/// Weight-norm growth checks shared by the run loops. The perceptron obeys
/// ||w||^2 <= 4 R^2 t, the batch variant the same with a k factor, and the
/// convex variant stays inside its projection ball.
template <class Learner>
inline void check_weight_bounds(const ExperimentConfig& cfg, const Learner& learner,
                                double norm_bound_r, long t) {
  const double n2 = squared_norm(learner.weights());
  check(std::isfinite(n2), "weights must stay finite");
  const double r2 = norm_bound_r * norm_bound_r;
  switch (cfg.learner) {
    case LearnerKind::perceptron:
      check(n2 <= 4.0 * r2 * static_cast<double>(t) * (1.0 + kCheckTol) + kCheckTol,
            "||w||^2 <= 4 R^2 t");
      break;
    case LearnerKind::batch:
      check(n2 <= 4.0 * r2 * static_cast<double>(cfg.batch_k) *
                      static_cast<double>(t) * (1.0 + kCheckTol) +
                  kCheckTol,
            "||w||^2 <= 4 R^2 k t");
      break;
    case LearnerKind::convex:
      check(std::sqrt(n2) <= cfg.convex_rho * (1.0 + 1e-12) + 1e-15,
            "||w|| <= rho");
      break;
  }
}

template <class Learner>
inline RunResult run_ranking(const ExperimentConfig& cfg, const RankingDataset& data,
                             Learner& learner, std::uint64_t seed,
                             const EventHook& hook) {
  RankingTask task(data.dim, data.max_doc_norm);
  RunResult result;
  result.seed = seed;
  result.w_star_norm = norm(data.w_star);
  result.norm_bound_r = task.map_spec().norm_bound;
  result.trace = RegretTrace(cfg.alpha_grid, bound_spec_for(cfg),
                             result.norm_bound_r, result.w_star_norm);

  SplitMix64 rng(mix_seeds(cfg.user_seed, seed));
  std::vector<std::size_t> order(data.contexts.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  rng.shuffle(order);

  std::vector<double> grid_slacks(cfg.alpha_grid.size());
  try {
  for (long t = 1; t <= cfg.rounds; ++t) {
    const std::size_t q = order[static_cast<std::size_t>((t - 1) %
                                static_cast<long>(order.size()))];
    const RankingContext& ctx = data.contexts[q];
    const std::vector<double>& scores = data.true_scores[q];
    const int k = task.scored_positions(ctx);

    const Ranking presented = task.argmax(learner.weights(), ctx);
    const double u_y = task.utility_from_scores(scores, presented, k);

    Ranking fed;
    switch (cfg.user) {
      case UserModelKind::strict_alpha:
        fed = strict_alpha_ranking_feedback(cfg.alpha, task, scores, ctx, presented);
        break;
      case UserModelKind::noisy_relevance:
        fed = noisy_relevance_feedback(ctx.labels, presented);
        break;
      case UserModelKind::expected_alpha:
        fed = expected_alpha_improves(cfg.improve_prob, rng)
                  ? strict_alpha_ranking_feedback(cfg.alpha, task, scores, ctx,
                                                  presented)
                  : presented;
        break;
      default:
        throw std::logic_error("run_ranking: unsupported user model");
    }
    const double u_bar = task.utility_from_scores(scores, fed, k);
    const double u_star = data.u_star[q];

    const double inst = regret_step(u_star, u_y);
    check(inst >= -kCheckTol * (1.0 + std::abs(u_star)), "regret_inst >= 0");
    for (std::size_t i = 0; i < grid_slacks.size(); ++i) {
      grid_slacks[i] = compute_slack(cfg.alpha_grid[i], u_star, u_y, u_bar);
    }
    const double slack_cfg = compute_slack(cfg.alpha, u_star, u_y, u_bar);
    if (cfg.user == UserModelKind::strict_alpha) {
      check(slack_cfg == 0.0, "strict user slack must be exactly zero");
      result.max_strict_slack = std::max(result.max_strict_slack, slack_cfg);
    }

    const FeatureVector phi_y = task.features(ctx, presented);
    const FeatureVector phi_bar = task.features(ctx, fed);
    const double s_y = dot(learner.weights(), phi_y);
    const double s_bar = dot(learner.weights(), phi_bar);
    const double align = s_bar - s_y;
    result.max_update_alignment = std::max(result.max_update_alignment, align);
    check(align <= kCheckTol * (1.0 + std::abs(s_y) + std::abs(s_bar)),
          "w . (phi(ybar) - phi(y)) <= 0");

    if (fed == presented) ++result.unchanged_feedback_rounds;
    learner.observe(phi_bar, phi_y);
    check_weight_bounds(cfg, learner, result.norm_bound_r, t);

    result.trace.record(static_cast<int>(t), inst, norm(learner.weights()),
                        grid_slacks, slack_cfg);
    if (hook) {
      FeedbackEvent ev;
      ev.round = static_cast<int>(t);
      ev.context_id = ctx.query_id;
      ev.presented = presented;
      ev.feedback = fed;
      ev.u_presented = u_y;
      ev.u_feedback = u_bar;
      ev.u_star = u_star;
      ev.slack = slack_cfg;
      hook(ev);
    }
  }
  } catch (const std::exception& e) {
    result.aborted = true;
    result.error = e.what();
  }
  result.update_count = learner.update_count();
  result.final_w = learner.weights();
  return result;
}

template <class Learner>
inline RunResult run_items(const ExperimentConfig& cfg, const ItemDataset& data,
                           Learner& learner, std::uint64_t seed,
                           const EventHook& hook) {
  ItemTask task(data.dim, data.max_item_norm);
  const std::size_t user_idx =
      static_cast<std::size_t>(seed % data.user_factors.size());
  const FeatureVector& w_star = data.user_factors[user_idx];

  RunResult result;
  result.seed = seed;
  result.w_star_norm = norm(w_star);
  result.norm_bound_r = task.map_spec().norm_bound;
  result.trace = RegretTrace(cfg.alpha_grid, bound_spec_for(cfg),
                             result.norm_bound_r, result.w_star_norm);

  ItemContext ctx = make_item_context(data.item_factors);
  const std::size_t n = ctx.size();
  std::vector<double> true_scores(n);
  for (std::size_t j = 0; j < n; ++j) true_scores[j] = dot(w_star, ctx.item_features[j]);

  // Ratings the simulated user reads: observed where available, otherwise
  // the utility score snapped to the 1..5 scale.
  std::vector<int> ratings(n);
  const std::map<int, int>& seen = data.observed[user_idx];
  for (std::size_t j = 0; j < n; ++j) {
    const auto it = seen.find(static_cast<int>(j));
    ratings[j] = it != seen.end() ? it->second : round_to_rating(true_scores[j]);
  }

  SplitMix64 rng(mix_seeds(cfg.user_seed, seed));
  std::vector<double> grid_slacks(cfg.alpha_grid.size());
  int available = ctx.available_count();
  try {
  for (long t = 1; t <= cfg.rounds; ++t) {
    check(available >= 1, "items available each round");
    const int presented = task.argmax(learner.weights(), ctx);
    const double u_y = true_scores[static_cast<std::size_t>(presented)];
    double u_star = u_y;
    for (std::size_t j = 0; j < n; ++j) {
      if (ctx.available[j] && true_scores[j] > u_star) u_star = true_scores[j];
    }

    int fed = presented;
    switch (cfg.user) {
      case UserModelKind::strict_alpha:
        fed = strict_alpha_minimal_index(cfg.alpha, true_scores, &ctx.available,
                                         presented);
        break;
      case UserModelKind::rating_increment:
        fed = rating_increment_feedback(ratings, ctx.available, presented);
        break;
      case UserModelKind::expected_alpha:
        fed = expected_alpha_improves(cfg.improve_prob, rng)
                  ? strict_alpha_minimal_index(cfg.alpha, true_scores,
                                               &ctx.available, presented)
                  : presented;
        break;
      default:
        throw std::logic_error("run_items: unsupported user model");
    }
    const double u_bar = true_scores[static_cast<std::size_t>(fed)];

    const double inst = regret_step(u_star, u_y);
    check(inst >= -kCheckTol * (1.0 + std::abs(u_star)), "regret_inst >= 0");
    for (std::size_t i = 0; i < grid_slacks.size(); ++i) {
      grid_slacks[i] = compute_slack(cfg.alpha_grid[i], u_star, u_y, u_bar);
    }
    const double slack_cfg = compute_slack(cfg.alpha, u_star, u_y, u_bar);
    if (cfg.user == UserModelKind::strict_alpha) {
      check(slack_cfg == 0.0, "strict user slack must be exactly zero");
      result.max_strict_slack = std::max(result.max_strict_slack, slack_cfg);
    }

    const FeatureVector& phi_y = ctx.item_features[static_cast<std::size_t>(presented)];
    const FeatureVector& phi_bar = ctx.item_features[static_cast<std::size_t>(fed)];
    const double s_y = dot(learner.weights(), phi_y);
    const double s_bar = dot(learner.weights(), phi_bar);
    const double align = s_bar - s_y;
    result.max_update_alignment = std::max(result.max_update_alignment, align);
    check(align <= kCheckTol * (1.0 + std::abs(s_y) + std::abs(s_bar)),
          "w . (phi(ybar) - phi(y)) <= 0");

    if (fed == presented) ++result.unchanged_feedback_rounds;
    learner.observe(phi_bar, phi_y);
    check_weight_bounds(cfg, learner, result.norm_bound_r, t);

    ItemTask::consume(ctx, presented, fed);
    const int now = ctx.available_count();
    check(now == available - (presented == fed ? 1 : 2),
          "availability shrinks by the consumed count");
    available = now;

    result.trace.record(static_cast<int>(t), inst, norm(learner.weights()),
                        grid_slacks, slack_cfg);
    if (hook) {
      FeedbackEvent ev;
      ev.round = static_cast<int>(t);
      ev.context_id = static_cast<int>(user_idx);
      ev.presented = {presented};
      ev.feedback = {fed};
      ev.u_presented = u_y;
      ev.u_feedback = u_bar;
      ev.u_star = u_star;
      ev.slack = slack_cfg;
      hook(ev);
    }
  }
  } catch (const std::exception& e) {
    result.aborted = true;
    result.error = e.what();
  }
  result.final_available_count = available;
  result.update_count = learner.update_count();
  result.final_w = learner.weights();
  return result;
}

template <class Learner>
inline RunResult run_adversary(const ExperimentConfig& cfg, Learner& learner,
                               std::uint64_t seed, const EventHook& hook) {
  AdversaryTask task(static_cast<int>(cfg.rounds));
  RunResult result;
  result.seed = seed;
  result.w_star_norm = 1.0;  // by construction
  result.norm_bound_r = task.map_spec().norm_bound;
  result.trace = RegretTrace(cfg.alpha_grid, bound_spec_for(cfg),
                             result.norm_bound_r, result.w_star_norm);

  const double inv = 1.0 / std::sqrt(static_cast<double>(cfg.rounds));
  std::vector<double> grid_slacks(cfg.alpha_grid.size());
  try {
  for (long t = 1; t <= cfg.rounds; ++t) {
    AdversaryTask::Context ctx{static_cast<int>(t - 1)};
    const int presented = task.argmax(learner.weights(), ctx);
    const int fed = task.feedback(ctx, presented);

    // Under the final w_star the presented object scores -1/sqrt(T) and
    // both the optimum and the feedback score +1/sqrt(T), every round.
    const double u_y = -inv;
    const double u_bar = inv;
    const double u_star = inv;
    const double inst = regret_step(u_star, u_y);
    for (std::size_t i = 0; i < grid_slacks.size(); ++i) {
      grid_slacks[i] = compute_slack(cfg.alpha_grid[i], u_star, u_y, u_bar);
    }
    const double slack_cfg = compute_slack(cfg.alpha, u_star, u_y, u_bar);
    check(slack_cfg == 0.0, "adversary feedback is strictly 1-informative");

    const FeatureVector phi_y = task.features(ctx, presented);
    const FeatureVector phi_bar = task.features(ctx, fed);
    const double align = dot(learner.weights(), phi_bar) - dot(learner.weights(), phi_y);
    result.max_update_alignment = std::max(result.max_update_alignment, align);
    check(align <= kCheckTol, "w . (phi(ybar) - phi(y)) <= 0");

    learner.observe(phi_bar, phi_y);
    check_weight_bounds(cfg, learner, result.norm_bound_r, t);

    result.trace.record(static_cast<int>(t), inst, norm(learner.weights()),
                        grid_slacks, slack_cfg);
    if (hook) {
      FeedbackEvent ev;
      ev.round = static_cast<int>(t);
      ev.context_id = static_cast<int>(t);
      ev.presented = {presented};
      ev.feedback = {fed};
      ev.u_presented = u_y;
      ev.u_feedback = u_bar;
      ev.u_star = u_star;
      ev.slack = slack_cfg;
      hook(ev);
    }
  }
  // Consistency of the shortcut utilities with the finalized vector.
  const FeatureVector w_star = task.w_star();
  check(std::abs(norm(w_star) - 1.0) <= 1e-12, "||w_star|| == 1");
  } catch (const std::exception& e) {
    result.aborted = true;
    result.error = e.what();
  }
  result.update_count = learner.update_count();
  result.final_w = learner.weights();
  return result;
}

template <class DataR, class DataI>
inline RunResult run_one_seed(const ExperimentConfig& cfg, const DataR* ranking_data,
                              const DataI* item_data, std::uint64_t seed,
                              const EventHook& hook) {
  const auto dispatch = [&](auto& learner) -> RunResult {
    switch (cfg.task) {
      case TaskKind::ranking:
        return run_ranking(cfg, *ranking_data, learner, seed, hook);
      case TaskKind::items:
        return run_items(cfg, *item_data, learner, seed, hook);
      case TaskKind::adversary:
        return run_adversary(cfg, learner, seed, hook);
    }
    throw std::logic_error("unknown task kind");
  };
  std::size_t dim = 0;
  switch (cfg.task) {
    case TaskKind::ranking: dim = ranking_data->dim; break;
    case TaskKind::items: dim = item_data->dim; break;
    case TaskKind::adversary: dim = static_cast<std::size_t>(cfg.rounds); break;
  }
  switch (cfg.learner) {
    case LearnerKind::perceptron: {
      PreferencePerceptron learner(dim);
      return dispatch(learner);
    }
    case LearnerKind::batch: {
      BatchPerceptron learner(dim, BatchConfig{cfg.batch_k});
      return dispatch(learner);
    }
    case LearnerKind::convex: {
      ConvexPreferencePerceptron learner(
          dim, ConvexLearnerConfig{cfg.convex_g, cfg.convex_rho});
      return dispatch(learner);
    }
  }
  throw std::logic_error("unknown learner kind");
}

}  // namespace detail

/// Mean and standard error of the per-seed average-regret curves. All runs
/// must be complete and equally long.
inline AggregateTrace aggregate_runs(const std::vector<RunResult>& runs) {
  AggregateTrace agg;
  if (runs.empty()) return agg;
  const std::size_t rounds = runs.front().trace.rows().size();
  for (const RunResult& r : runs) {
    if (r.aborted) throw std::invalid_argument("aggregate_runs: aborted run");
    if (r.trace.rows().size() != rounds) {
      throw std::invalid_argument("aggregate_runs: trace length mismatch");
    }
  }
  const double n = static_cast<double>(runs.size());
  agg.rounds.resize(rounds);
  agg.regret_avg_mean.resize(rounds);
  agg.regret_avg_stderr.resize(rounds);
  for (std::size_t i = 0; i < rounds; ++i) {
    agg.rounds[i] = runs.front().trace.rows()[i].round;
    double mean = 0.0;
    for (const RunResult& r : runs) mean += r.trace.rows()[i].regret_avg;
    mean /= n;
    double varsum = 0.0;
    for (const RunResult& r : runs) {
      const double d = r.trace.rows()[i].regret_avg - mean;
      varsum += d * d;
    }
    agg.regret_avg_mean[i] = mean;
    agg.regret_avg_stderr[i] =
        runs.size() > 1 ? std::sqrt(varsum / (n - 1.0)) / std::sqrt(n) : 0.0;
  }
  return agg;
}

/// Runs every seed of the experiment in memory. A run hitting a runtime
/// invariant violation is returned truncated with its aborted flag set and
/// the aggregate left empty; callers decide whether to raise.
inline ExperimentResult simulate(const ExperimentConfig& cfg,
                                 const EventHook& hook = EventHook()) {
  validate(cfg);
  ExperimentResult result;
  result.config = cfg;

  detail::RankingDataset ranking_data;
  detail::ItemDataset item_data;
  if (cfg.task == TaskKind::ranking) ranking_data = detail::prepare_ranking_data(cfg);
  if (cfg.task == TaskKind::items) item_data = detail::prepare_item_data(cfg);

  bool any_aborted = false;
  for (std::uint64_t seed : cfg.seeds) {
    result.runs.push_back(
        detail::run_one_seed(cfg, &ranking_data, &item_data, seed, hook));
    any_aborted |= result.runs.back().aborted;
  }
  if (!any_aborted) result.aggregate = aggregate_runs(result.runs);
  return result;
}

/// Writes one run's trace in the documented CSV schema. Aborted runs carry
/// a trailing flag line so partial traces cannot be mistaken for complete
/// ones.
inline void write_trace_csv(std::ostream& out, const RunResult& run) {
  out << "round,regret_inst,regret_avg,bound_theorem1,norm_w";
  for (double a : run.trace.alpha_grid()) {
    out << ",slack_sum_alpha_" << detail::format_g(a);
  }
  out << '\n';
  for (const RegretTrace::Row& row : run.trace.rows()) {
    out << row.round << ',' << detail::format_g17(row.regret_inst) << ','
        << detail::format_g17(row.regret_avg) << ','
        << detail::format_g17(row.bound_theorem1) << ','
        << detail::format_g17(row.norm_w);
    for (double s : row.slack_sums) out << ',' << detail::format_g17(s);
    out << '\n';
  }
  if (run.aborted) out << "# aborted: " << run.error << '\n';
}

inline void write_aggregate_csv(std::ostream& out, const AggregateTrace& agg) {
  out << "round,regret_avg_mean,regret_avg_stderr\n";
  for (std::size_t i = 0; i < agg.rounds.size(); ++i) {
    out << agg.rounds[i] << ',' << detail::format_g17(agg.regret_avg_mean[i]) << ','
        << detail::format_g17(agg.regret_avg_stderr[i]) << '\n';
  }
}

/// Full experiment: simulate, then write per-seed traces, the aggregate,
/// and the canonical config echo into the output directory. Raises after
/// flagging partial traces if any run aborted.
inline ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                       const EventHook& hook = EventHook()) {
  ExperimentResult result = simulate(cfg, hook);
  const std::filesystem::path dir(cfg.out_dir);
  std::filesystem::create_directories(dir);

  const auto write_file = [&](const std::filesystem::path& p, auto&& body) {
    std::ofstream out(p);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    body(out);
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + p.string());
  };

  for (const RunResult& run : result.runs) {
    const std::filesystem::path p =
        dir / ("trace_seed_" + std::to_string(run.seed) + ".csv");
    write_file(p, [&](std::ostream& o) { write_trace_csv(o, run); });
  }
  if (!result.aggregate.rounds.empty()) {
    write_file(dir / "aggregate.csv",
               [&](std::ostream& o) { write_aggregate_csv(o, result.aggregate); });
  }
  write_file(dir / "config.txt",
             [&](std::ostream& o) { o << serialize_config(cfg); });

  for (const RunResult& run : result.runs) {
    if (run.aborted) {
      throw std::runtime_error("seed " + std::to_string(run.seed) +
                               " aborted: " + run.error);
    }
  }
  return result;
}

}  // namespace coactive
