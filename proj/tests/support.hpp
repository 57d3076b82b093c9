#pragma once

// Helpers shared by the unit, property and acceptance tests.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "dtwin/core.hpp"
#include "dtwin/policy.hpp"

namespace dtwin::testing {

// Minimum over all matchings of size min(rows, cols), each matching's cost
// summed in row order (the same order hungarian() uses for its total).
inline double brute_force_min_cost(const CostMatrix& c) {
  const std::size_t r = c.rows();
  const std::size_t k = c.cols();
  if (r == 0 || k == 0) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  if (r <= k) {
    // Every injective map rows -> cols: permutations of the column indices,
    // keeping the first r.
    std::vector<std::size_t> cols(k);
    std::iota(cols.begin(), cols.end(), std::size_t{0});
    do {
      double total = 0.0;
      for (std::size_t i = 0; i < r; ++i) total += c(i, cols[i]);
      best = std::min(best, total);
    } while (std::next_permutation(cols.begin(), cols.end()));
  } else {
    // Every injective map cols -> rows; sum in row order.
    std::vector<std::size_t> rows(r);
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    do {
      std::vector<std::pair<std::size_t, std::size_t>> pairs;
      for (std::size_t j = 0; j < k; ++j) pairs.emplace_back(rows[j], j);
      std::sort(pairs.begin(), pairs.end());
      double total = 0.0;
      for (const auto& [i, j] : pairs) total += c(i, j);
      best = std::min(best, total);
    } while (std::next_permutation(rows.begin(), rows.end()));
  }
  return best;
}

inline CostMatrix random_matrix(StreamCursor& rng, std::size_t rows, std::size_t cols, bool integer) {
  CostMatrix c(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      c(i, j) = integer ? std::floor(rng.uniform() * 5.0) : 100.0 * rng.uniform();
    }
  }
  return c;
}

// States whose entries are multiples of 2^-10 in [-512, 512): sums and
// differences of such values are exact in double precision.
inline StateVector dyadic_state(StreamCursor& rng, std::size_t dim) {
  std::vector<double> v(dim);
  for (auto& x : v) x = std::ldexp(std::floor(rng.uniform() * 1048576.0) - 524288.0, -10);
  return StateVector(std::move(v));
}

inline StateVector real_state(StreamCursor& rng, std::size_t dim, double scale = 100.0) {
  std::vector<double> v(dim);
  for (auto& x : v) x = scale * (2.0 * rng.uniform() - 1.0);
  return StateVector(std::move(v));
}

inline Trajectory random_trajectory(StreamCursor& rng, std::size_t length, std::size_t dim, bool dyadic) {
  Trajectory t;
  for (std::size_t i = 0; i < length; ++i) t.push_back(dyadic ? dyadic_state(rng, dim) : real_state(rng, dim));
  return t;
}

}  // namespace dtwin::testing
