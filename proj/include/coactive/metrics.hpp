/// @file  metrics.hpp
/// @brief Regret accounting, the regret/loss upper bounds, and retrieval
///        quality metrics.

#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "coactive/ranking.hpp"
#include "coactive/vector.hpp"

namespace coactive {

/// Instantaneous regret U(x, y*) - U(x, y). Nonnegative whenever u_star is
/// the true maximum.
inline double regret_step(double u_star, double u_presented) {
  return u_star - u_presented;
}

/// Average-regret upper bound for the preference perceptron after T rounds:
///   slack_sum / (alpha T) + 2 R ||w*|| / (alpha sqrt(T)).
inline double theorem1_bound(double alpha, double slack_sum, double norm_bound_r,
                             double w_star_norm, double t_rounds) {
  return slack_sum / (alpha * t_rounds) +
         2.0 * norm_bound_r * w_star_norm / (alpha * std::sqrt(t_rounds));
}

/// Expected-regret bound under expected alpha-informative feedback; the
/// right-hand side coincides with theorem1_bound with expected slacks.
inline double corollary1_bound(double alpha, double expected_slack_sum,
                               double norm_bound_r, double w_star_norm,
                               double t_rounds) {
  return theorem1_bound(alpha, expected_slack_sum, norm_bound_r, w_star_norm,
                        t_rounds);
}

/// Bound for the batch variant updating every k rounds: the constant term
/// picks up a sqrt(k) factor.
inline double batch_bound(double alpha, double slack_sum, double norm_bound_r,
                          double w_star_norm, int k, double t_rounds) {
  return slack_sum / (alpha * t_rounds) +
         2.0 * norm_bound_r * w_star_norm * std::sqrt(static_cast<double>(k)) /
             (alpha * std::sqrt(t_rounds));
}

/// Average convex loss bound for the convex preference perceptron:
///   (1/T) sum c_t(0) + 2 G slack_sum / (alpha T)
///   + (1/alpha) (|B| G / (2 sqrt(T)) + |B| G / T + 4 R^2 G / sqrt(T)).
inline double theorem2_bound(double alpha, double slack_sum, double g_bound,
                             double ball_diameter, double norm_bound_r,
                             double t_rounds, double baseline_loss_sum) {
  const double sqrt_t = std::sqrt(t_rounds);
  return baseline_loss_sum / t_rounds +
         2.0 * g_bound * slack_sum / (alpha * t_rounds) +
         (1.0 / alpha) * (ball_diameter * g_bound / (2.0 * sqrt_t) +
                          ball_diameter * g_bound / t_rounds +
                          4.0 * norm_bound_r * norm_bound_r * g_bound / sqrt_t);
}

/// Discounted cumulative gain over the top k positions:
///   sum_{i < min(k, len)} relevance(y_i) / log2(i + 2).
inline double dcg_at_k(const std::vector<int>& relevances, const Ranking& ranking,
                       int k) {
  if (k < 1) throw std::invalid_argument("dcg_at_k: k must be >= 1");
  const int m = std::min<int>(k, static_cast<int>(ranking.size()));
  double dcg = 0.0;
  for (int i = 0; i < m; ++i) {
    dcg += relevances[static_cast<std::size_t>(ranking[static_cast<std::size_t>(i)])] *
           position_discount(i);
  }
  return dcg;
}

/// Non-increasing convex losses of the utility difference
/// theta = U(x, y_t) - U(x, y_t*), used metrics-side only; the learner never
/// observes them. Subderivatives lie in [-G, 0] with the stated G.
struct ConvexLoss {
  const char* name;
  double (*value)(double theta);
  double subgradient_bound_g;
};

inline ConvexLoss hinge_loss() {
  return {"hinge", [](double theta) { return std::max(0.0, -theta); }, 1.0};
}

inline ConvexLoss logistic_loss() {
  return {"logistic", [](double theta) { return std::log1p(std::exp(-theta)); }, 1.0};
}

/// Least-squares slope of y against x; used on (log T, log REG_T) pairs to
/// read off the empirical decay rate.
inline double least_squares_slope(const std::vector<double>& xs,
                                  const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw std::invalid_argument("least_squares_slope: need >= 2 paired points");
  }
  const double n = static_cast<double>(xs.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw std::invalid_argument("least_squares_slope: degenerate xs");
  return (n * sxy - sx * sy) / denom;
}

/// Which upper bound the trace's bound column reports, with its parameters.
/// theorem1 covers the plain perceptron, batch adds the sqrt(k) factor, and
/// theorem2 is the convex-loss bound (baseline_per_round holds c(0)).
struct BoundSpec {
  enum class Kind { theorem1, batch, theorem2 };
  Kind kind = Kind::theorem1;
  double alpha = 1.0;
  int batch_k = 1;
  double g_bound = 1.0;
  double ball_diameter = 2.0;
  double baseline_per_round = 0.0;

  double evaluate(double slack_sum, double norm_bound_r, double w_star_norm,
                  double t_rounds) const {
    switch (kind) {
      case Kind::batch:
        return batch_bound(alpha, slack_sum, norm_bound_r, w_star_norm, batch_k,
                           t_rounds);
      case Kind::theorem2:
        return theorem2_bound(alpha, slack_sum, g_bound, ball_diameter,
                              norm_bound_r, t_rounds,
                              baseline_per_round * t_rounds);
      case Kind::theorem1:
      default:
        return theorem1_bound(alpha, slack_sum, norm_bound_r, w_star_norm,
                              t_rounds);
    }
  }
};

/// Per-round regret trace with bound values and diagnostics. The slack
/// accumulators follow a configurable alpha grid; the bound column is
/// evaluated per BoundSpec with the slack accumulated at its alpha.
class RegretTrace {
 public:
  struct Row {
    int round = 0;
    double regret_inst = 0.0;
    double regret_cum = 0.0;
    double regret_avg = 0.0;
    double bound_theorem1 = 0.0;
    double norm_w = 0.0;                  // after the round's update
    std::vector<double> slack_sums;       // one per grid alpha
  };

  RegretTrace() = default;
  RegretTrace(std::vector<double> alpha_grid, BoundSpec bound,
              double norm_bound_r, double w_star_norm)
      : alpha_grid_(std::move(alpha_grid)),
        bound_(bound),
        norm_bound_r_(norm_bound_r),
        w_star_norm_(w_star_norm),
        grid_sums_(alpha_grid_.size(), 0.0) {}

  /// Records one completed round. Slack values must be ordered like the
  /// alpha grid; bound_alpha_slack is the slack at the configured alpha.
  void record(int round, double regret_inst, double norm_w_after,
              const std::vector<double>& grid_slacks, double bound_alpha_slack) {
    if (grid_slacks.size() != grid_sums_.size()) {
      throw std::invalid_argument("RegretTrace: slack grid size mismatch");
    }
    cum_ += regret_inst;
    bound_slack_sum_ += bound_alpha_slack;
    for (std::size_t i = 0; i < grid_sums_.size(); ++i) grid_sums_[i] += grid_slacks[i];
    Row row;
    row.round = round;
    row.regret_inst = regret_inst;
    row.regret_cum = cum_;
    row.regret_avg = cum_ / static_cast<double>(round);
    row.bound_theorem1 = bound_.evaluate(bound_slack_sum_, norm_bound_r_,
                                         w_star_norm_, static_cast<double>(round));
    row.norm_w = norm_w_after;
    row.slack_sums = grid_sums_;
    rows_.push_back(std::move(row));
  }

  const std::vector<Row>& rows() const { return rows_; }
  const std::vector<double>& alpha_grid() const { return alpha_grid_; }
  const BoundSpec& bound_spec() const { return bound_; }
  double bound_alpha() const { return bound_.alpha; }
  double norm_bound_r() const { return norm_bound_r_; }
  double w_star_norm() const { return w_star_norm_; }

  /// Average regret after the given 1-based round.
  double average_regret_at(int round) const {
    return rows_.at(static_cast<std::size_t>(round - 1)).regret_avg;
  }

 private:
  std::vector<double> alpha_grid_;
  BoundSpec bound_;
  double norm_bound_r_ = 0.0;
  double w_star_norm_ = 0.0;
  double cum_ = 0.0;
  double bound_slack_sum_ = 0.0;
  std::vector<double> grid_sums_;
  std::vector<Row> rows_;
};

}  // namespace coactive
