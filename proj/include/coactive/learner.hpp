/// @file  learner.hpp
/// @brief The three online learners behind one present/observe round
///        interface.
///
/// A learner owns a weight vector, starts at w = 0, and each round consumes
/// the pair (phi(x_t, ybar_t), phi(x_t, y_t)). It never sees utilities or
/// the hidden w_star; the feature difference is its only signal.

#pragma once

#include <cmath>
#include <concepts>
#include <cstddef>
#include <stdexcept>

#include "coactive/vector.hpp"

namespace coactive {

/// Weight vector plus round bookkeeping shared by every learner.
/// t is 1-based and advances exactly once per completed round;
/// update_count counts rounds whose feedback actually moved the weights.
struct LearnerState {
  FeatureVector w;
  int t = 1;
  int update_count = 0;
};

template <class T>
concept JointFeatureTask = requires(const T task, const FeatureVector& w,
                                    const typename T::Context& ctx,
                                    const typename T::Object& y) {
  { task.features(ctx, y) } -> std::convertible_to<FeatureVector>;
  { task.argmax(w, ctx) } -> std::convertible_to<typename T::Object>;
  { task.map_spec() } -> std::convertible_to<FeatureMapSpec>;
};

template <class L>
concept OnlineLearner = requires(L learner, const FeatureVector& phi) {
  { learner.weights() } -> std::convertible_to<const FeatureVector&>;
  { learner.round() } -> std::convertible_to<int>;
  learner.observe(phi, phi);
};

/// Presents the argmax object under the learner's current weights.
template <class Learner, JointFeatureTask Task>
typename Task::Object present(const Learner& learner, const Task& task,
                              const typename Task::Context& ctx) {
  return task.argmax(learner.weights(), ctx);
}

namespace detail {

inline FeatureVector round_difference(const FeatureVector& phi_bar,
                                      const FeatureVector& phi) {
  require_same_dim(phi_bar, phi, "learner::observe");
  FeatureVector d(phi_bar.size());
  bool nonzero = false;
  for (std::size_t i = 0; i < d.size(); ++i) {
    d[i] = phi_bar[i] - phi[i];
    nonzero |= (d[i] != 0.0);
  }
  if (!nonzero) d.clear();  // empty marks a zero update
  return d;
}

}  // namespace detail

/// Additive update w <- w + phi(ybar) - phi(y) after every round.
class PreferencePerceptron {
 public:
  explicit PreferencePerceptron(std::size_t dim) { state_.w = zeros(dim); }

  const FeatureVector& weights() const { return state_.w; }
  int round() const { return state_.t; }
  int update_count() const { return state_.update_count; }
  const LearnerState& state() const { return state_; }

  void observe(const FeatureVector& phi_bar, const FeatureVector& phi) {
    FeatureVector d = detail::round_difference(phi_bar, phi);
    if (!d.empty()) {
      add_scaled(state_.w, 1.0, d);
      ++state_.update_count;
    }
    ++state_.t;
  }

 private:
  LearnerState state_;
};

struct BatchConfig {
  int k = 1;  // update period in rounds
};

/// Buffers feature differences and applies their sum every k rounds; between
/// updates the weights from the previous update keep being used.
class BatchPerceptron {
 public:
  BatchPerceptron(std::size_t dim, BatchConfig config) : config_(config) {
    if (config.k < 1) throw std::invalid_argument("BatchPerceptron: k must be >= 1");
    state_.w = zeros(dim);
    pending_ = zeros(dim);
  }

  const FeatureVector& weights() const { return state_.w; }
  int round() const { return state_.t; }
  int update_count() const { return state_.update_count; }
  const LearnerState& state() const { return state_; }
  const BatchConfig& config() const { return config_; }

  void observe(const FeatureVector& phi_bar, const FeatureVector& phi) {
    FeatureVector d = detail::round_difference(phi_bar, phi);
    if (!d.empty()) add_scaled(pending_, 1.0, d);
    if (state_.t % config_.k == 0) {
      bool nonzero = false;
      for (double x : pending_) nonzero |= (x != 0.0);
      if (nonzero) {
        add_scaled(state_.w, 1.0, pending_);
        ++state_.update_count;
      }
      pending_.assign(pending_.size(), 0.0);
    }
    ++state_.t;
  }

 private:
  BatchConfig config_;
  LearnerState state_;
  FeatureVector pending_;
};

/// Euclidean projection onto the ball of radius rho.
inline FeatureVector project_ball(const FeatureVector& u, double rho) {
  if (rho <= 0.0) throw std::invalid_argument("project_ball: rho must be positive");
  const double n = norm(u);
  if (n <= rho) return u;
  FeatureVector out(u.size());
  const double scale = rho / n;
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = u[i] * scale;
  return out;
}

struct ConvexLearnerConfig {
  double subgradient_bound_g = 1.0;  // G
  double ball_radius_rho = 1.0;      // projection ball; diameter 2*rho
};

/// Step-size-scaled, ball-projected variant:
///   wbar <- w + (G / sqrt(t)) * (phi(ybar) - phi(y));
///   w    <- projection of wbar onto the rho-ball.
/// The projection set is fixed to a Euclidean ball so the projection has a
/// closed form and the ball diameter 2*rho plugs into the loss bound.
class ConvexPreferencePerceptron {
 public:
  ConvexPreferencePerceptron(std::size_t dim, ConvexLearnerConfig config)
      : config_(config) {
    if (config.subgradient_bound_g <= 0.0) {
      throw std::invalid_argument("ConvexPreferencePerceptron: G must be positive");
    }
    if (config.ball_radius_rho <= 0.0) {
      throw std::invalid_argument("ConvexPreferencePerceptron: rho must be positive");
    }
    state_.w = zeros(dim);
  }

  const FeatureVector& weights() const { return state_.w; }
  int round() const { return state_.t; }
  int update_count() const { return state_.update_count; }
  const LearnerState& state() const { return state_; }
  const ConvexLearnerConfig& config() const { return config_; }

  void observe(const FeatureVector& phi_bar, const FeatureVector& phi) {
    FeatureVector d = detail::round_difference(phi_bar, phi);
    if (!d.empty()) {
      const double eta = 1.0 / std::sqrt(static_cast<double>(state_.t));
      FeatureVector wbar =
          scale_add(state_.w, eta * config_.subgradient_bound_g, d);
      state_.w = project_ball(wbar, config_.ball_radius_rho);
      ++state_.update_count;
    }
    ++state_.t;
  }

 private:
  ConvexLearnerConfig config_;
  LearnerState state_;
};

}  // namespace coactive
