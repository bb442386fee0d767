/// @file  fit.hpp
/// @brief Ground-truth fitting: ridge least squares and alternating
///        least-squares factorization of a ratings matrix.

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "coactive/ratings.hpp"
#include "coactive/rng.hpp"
#include "coactive/vector.hpp"

namespace coactive {

/// Solves argmin_w sum_i (w . x_i - r_i)^2 + lambda ||w||^2.
/// With lambda = 0 the system must have full column rank; a rank-deficient
/// system raises an error pointing at the lambda knob.
inline FeatureVector fit_least_squares(const std::vector<FeatureVector>& features,
                                       const std::vector<double>& targets,
                                       double ridge_lambda) {
  if (features.empty()) throw std::invalid_argument("fit_least_squares: no examples");
  if (features.size() != targets.size()) {
    throw std::invalid_argument("fit_least_squares: features/targets length mismatch");
  }
  if (ridge_lambda < 0.0) {
    throw std::invalid_argument("fit_least_squares: ridge_lambda must be >= 0");
  }
  const auto rows = static_cast<Eigen::Index>(features.size());
  const auto cols = static_cast<Eigen::Index>(features.front().size());
  Eigen::MatrixXd x(rows, cols);
  Eigen::VectorXd r(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    if (static_cast<Eigen::Index>(features[static_cast<std::size_t>(i)].size()) != cols) {
      throw std::invalid_argument("fit_least_squares: inconsistent feature dimension");
    }
    for (Eigen::Index j = 0; j < cols; ++j) {
      x(i, j) = features[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
    r(i) = targets[static_cast<std::size_t>(i)];
  }

  Eigen::VectorXd w;
  if (ridge_lambda == 0.0) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
    if (qr.rank() < cols) {
      throw std::runtime_error(
          "fit_least_squares: degenerate system at lambda = 0; "
          "set ridge_lambda > 0 for a unique solution");
    }
    w = qr.solve(r);
  } else {
    Eigen::MatrixXd gram = x.transpose() * x;
    gram.diagonal().array() += ridge_lambda;
    w = Eigen::LDLT<Eigen::MatrixXd>(gram).solve(x.transpose() * r);
  }
  return FeatureVector(w.data(), w.data() + w.size());
}

/// Result of factorize_ratings. Factors are indexed by the dense ids in
/// user_index / item_index, which map external ids to rows in order of
/// first appearance in the triples.
struct RatingsFactorization {
  std::vector<FeatureVector> user_factors;
  std::vector<FeatureVector> item_factors;
  std::map<std::int64_t, int> user_index;
  std::map<std::int64_t, int> item_index;

  double predict(int user, int item) const {
    return dot(user_factors[static_cast<std::size_t>(user)],
               item_factors[static_cast<std::size_t>(item)]);
  }
};

/// Alternating least squares on the observed entries of the user x item
/// rating matrix:
///   min_{U, M} sum_observed (u_i . m_j - r_ij)^2
///              + reg (sum_i ||u_i||^2 + sum_j ||m_j||^2).
/// Initialization and sweep order are fixed, so the result is a
/// deterministic function of (triples, rank, reg, iters, seed).
inline RatingsFactorization factorize_ratings(const std::vector<RatingsTriple>& triples,
                                              int rank, double reg, int iters,
                                              std::uint64_t seed) {
  if (triples.empty()) throw std::invalid_argument("factorize_ratings: no ratings");
  if (rank < 1) throw std::invalid_argument("factorize_ratings: rank must be >= 1");
  if (iters < 1) throw std::invalid_argument("factorize_ratings: iters must be >= 1");
  if (reg < 0.0) throw std::invalid_argument("factorize_ratings: reg must be >= 0");

  RatingsFactorization out;
  for (const RatingsTriple& t : triples) {
    out.user_index.try_emplace(t.user, static_cast<int>(out.user_index.size()));
    out.item_index.try_emplace(t.item, static_cast<int>(out.item_index.size()));
  }
  const int n_users = static_cast<int>(out.user_index.size());
  const int n_items = static_cast<int>(out.item_index.size());

  std::vector<std::vector<std::pair<int, double>>> by_user(
      static_cast<std::size_t>(n_users)),
      by_item(static_cast<std::size_t>(n_items));
  for (const RatingsTriple& t : triples) {
    const int u = out.user_index[t.user];
    const int j = out.item_index[t.item];
    by_user[static_cast<std::size_t>(u)].emplace_back(j, static_cast<double>(t.rating));
    by_item[static_cast<std::size_t>(j)].emplace_back(u, static_cast<double>(t.rating));
  }

  Eigen::MatrixXd users = Eigen::MatrixXd::Zero(n_users, rank);
  Eigen::MatrixXd items(n_items, rank);
  SplitMix64 rng(seed);
  for (int j = 0; j < n_items; ++j) {
    for (int f = 0; f < rank; ++f) items(j, f) = 0.1 * rng.next_normal();
  }

  const auto solve_side = [&](Eigen::MatrixXd& target, const Eigen::MatrixXd& fixed,
                              const std::vector<std::vector<std::pair<int, double>>>&
                                  observed) {
    for (std::size_t i = 0; i < observed.size(); ++i) {
      if (observed[i].empty()) {
        target.row(static_cast<Eigen::Index>(i)).setZero();
        continue;
      }
      Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(rank, rank);
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(rank);
      for (const auto& [other, rating] : observed[i]) {
        const auto row = fixed.row(other);
        gram.noalias() += row.transpose() * row;
        rhs.noalias() += row.transpose() * rating;
      }
      gram.diagonal().array() += reg;
      target.row(static_cast<Eigen::Index>(i)) =
          Eigen::LDLT<Eigen::MatrixXd>(gram).solve(rhs).transpose();
    }
  };

  for (int it = 0; it < iters; ++it) {
    solve_side(users, items, by_user);
    solve_side(items, users, by_item);
  }

  const auto to_rows = [rank](const Eigen::MatrixXd& m) {
    std::vector<FeatureVector> rows(static_cast<std::size_t>(m.rows()));
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      FeatureVector v(static_cast<std::size_t>(rank));
      for (int f = 0; f < rank; ++f) v[static_cast<std::size_t>(f)] = m(i, f);
      rows[static_cast<std::size_t>(i)] = std::move(v);
    }
    return rows;
  };
  out.user_factors = to_rows(users);
  out.item_factors = to_rows(items);
  return out;
}

}  // namespace coactive
