/// @file  vector.hpp
/// @brief Dense feature vectors and the arithmetic every other module builds on.

#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace coactive {

/// Dense real vector. Dimension is fixed per experiment; all binary
/// operations require operands of equal dimension.
using FeatureVector = std::vector<double>;

/// Declared properties of a joint feature map phi(context, object).
/// The norm bound is declared by each task, not measured: every admissible
/// phi must satisfy ||phi||_2 <= norm_bound.
struct FeatureMapSpec {
  std::size_t dimension = 0;
  double norm_bound = 0.0;
};

/// Hidden utility parameters. Owned by simulators and metrics; learners
/// never see it.
struct GroundTruthUtility {
  FeatureVector w_star;
};

inline FeatureVector zeros(std::size_t dim) { return FeatureVector(dim, 0.0); }

inline void require_same_dim(const FeatureVector& a, const FeatureVector& b,
                             const char* where) {
  if (a.size() != b.size()) {
    throw std::invalid_argument(std::string(where) + ": dimension mismatch (" +
                                std::to_string(a.size()) + " vs " +
                                std::to_string(b.size()) + ")");
  }
}

/// Inner product, accumulated left to right.
inline double dot(const FeatureVector& a, const FeatureVector& b) {
  require_same_dim(a, b, "dot");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

/// Returns w + coeff * d. Inputs are left unmodified.
inline FeatureVector scale_add(const FeatureVector& w, double coeff,
                               const FeatureVector& d) {
  require_same_dim(w, d, "scale_add");
  if (!std::isfinite(coeff)) {
    throw std::invalid_argument("scale_add: non-finite coefficient");
  }
  FeatureVector out(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) out[i] = w[i] + coeff * d[i];
  return out;
}

/// In-place w += coeff * d for hot loops; same contract as scale_add.
inline void add_scaled(FeatureVector& w, double coeff, const FeatureVector& d) {
  require_same_dim(w, d, "add_scaled");
  if (!std::isfinite(coeff)) {
    throw std::invalid_argument("add_scaled: non-finite coefficient");
  }
  for (std::size_t i = 0; i < w.size(); ++i) w[i] += coeff * d[i];
}

inline double squared_norm(const FeatureVector& v) { return dot(v, v); }

inline double norm(const FeatureVector& v) { return std::sqrt(squared_norm(v)); }

inline bool all_finite(const FeatureVector& v) {
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

}  // namespace coactive
