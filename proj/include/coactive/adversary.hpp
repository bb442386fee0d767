/// @file  adversary.hpp
/// @brief Adversarial lower-bound construction: binary predictions on basis
///        contexts, with feedback that always opposes the learner.

#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "coactive/vector.hpp"

namespace coactive {

/// Binary prediction task over contexts e_1..e_T (standard basis vectors of
/// dimension T) with phi(e_j, y) = y * e_j and objects {-1, +1}. The
/// adversary records each prediction, answers with its negation, and after
/// the horizon reveals the unit-norm w_star = [-y_1, ..., -y_T] / sqrt(T)
/// under which that feedback was optimal all along. Every round then carries
/// regret exactly 2/sqrt(T).
class AdversaryTask {
 public:
  struct Context {
    int index = 0;  // 0-based round index; context is e_{index+1}
  };
  using Object = int;  // -1 or +1

  explicit AdversaryTask(int horizon) : horizon_(horizon) {
    if (horizon < 1) throw std::invalid_argument("AdversaryTask: horizon must be >= 1");
    recorded_.reserve(static_cast<std::size_t>(horizon));
  }

  int horizon() const { return horizon_; }

  FeatureMapSpec map_spec() const {
    return {static_cast<std::size_t>(horizon_), 1.0};
  }

  FeatureVector features(const Context& ctx, int y) const {
    check_object(y);
    FeatureVector phi = zeros(static_cast<std::size_t>(horizon_));
    phi[static_cast<std::size_t>(ctx.index)] = static_cast<double>(y);
    return phi;
  }

  /// Candidates in canonical order {-1, +1}; ties keep the lower index.
  int argmax(const FeatureVector& w, const Context& ctx) const {
    const double coord = w.at(static_cast<std::size_t>(ctx.index));
    const int candidates[2] = {-1, +1};
    int best = candidates[0];
    double best_score = candidates[0] * coord;
    for (int c = 1; c < 2; ++c) {
      const double s = candidates[c] * coord;
      if (s > best_score) {
        best = candidates[c];
        best_score = s;
      }
    }
    return best;
  }

  /// Records the learner's prediction and returns the opposing feedback.
  /// This feedback is strictly 1-informative under the final w_star.
  int feedback(const Context& ctx, int presented) {
    check_object(presented);
    if (ctx.index != static_cast<int>(recorded_.size())) {
      throw std::logic_error("AdversaryTask: rounds must be played in order");
    }
    if (ctx.index >= horizon_) {
      throw std::logic_error("AdversaryTask: past the horizon");
    }
    recorded_.push_back(presented);
    return -presented;
  }

  bool complete() const { return static_cast<int>(recorded_.size()) == horizon_; }

  /// Finalized hidden utility vector; unit norm by construction.
  FeatureVector w_star() const {
    if (!complete()) throw std::logic_error("AdversaryTask: run not complete");
    const double inv_sqrt_t = 1.0 / std::sqrt(static_cast<double>(horizon_));
    FeatureVector w(static_cast<std::size_t>(horizon_));
    for (int t = 0; t < horizon_; ++t) {
      w[static_cast<std::size_t>(t)] = -recorded_[static_cast<std::size_t>(t)] * inv_sqrt_t;
    }
    return w;
  }

  const std::vector<int>& recorded() const { return recorded_; }

 private:
  static void check_object(int y) {
    if (y != -1 && y != 1) throw std::invalid_argument("AdversaryTask: object must be +/-1");
  }

  int horizon_;
  std::vector<int> recorded_;
};

}  // namespace coactive
