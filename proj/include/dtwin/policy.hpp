#pragma once

// The fixed strategy G: Hungarian target allocation followed by direct aiming.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <utility>
#include <vector>

#include "dtwin/core.hpp"
#include "dtwin/env.hpp"

namespace dtwin {

class CostMatrix {
 public:
  CostMatrix() = default;
  CostMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  CostMatrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    for (const auto& r : rows) {
      if (r.size() != cols_) throw InvalidArgument("CostMatrix: ragged rows");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
  [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct Assignment {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (row, col), sorted by row
  std::vector<std::size_t> unassigned;                     // rows without a column
  double total = 0.0;                                      // summed in row order
};

namespace detail {

// Minimum total cost of a matching of size min(|rows|, |cols|) restricted to
// the given index subsets. Shortest augmenting path with potentials, O(n^2 m).
inline double min_matching_cost(const CostMatrix& cost, const std::vector<std::size_t>& rows,
                                const std::vector<std::size_t>& cols,
                                std::vector<std::pair<std::size_t, std::size_t>>* pairs = nullptr) {
  const bool transpose = rows.size() > cols.size();
  const auto& R = transpose ? cols : rows;
  const auto& C = transpose ? rows : cols;
  const std::size_t n = R.size();
  const std::size_t m = C.size();
  if (pairs) pairs->clear();
  if (n == 0) return 0.0;
  auto at = [&](std::size_t i, std::size_t j) {
    return transpose ? cost(C[j], R[i]) : cost(R[i], C[j]);
  };

  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<std::size_t> p(m + 1, 0), way(m + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(m + 1, inf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = at(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  double total = 0.0;
  for (std::size_t j = 1; j <= m; ++j) {
    if (p[j] == 0) continue;
    total += at(p[j] - 1, j - 1);
    if (pairs) {
      if (transpose) {
        pairs->emplace_back(C[j - 1], R[p[j] - 1]);
      } else {
        pairs->emplace_back(R[p[j] - 1], C[j - 1]);
      }
    }
  }
  return total;
}

inline bool same_cost(double a, double b) noexcept {
  return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace detail

// Minimum-cost matching of size min(rows, cols). Among optimal matchings the
// lexicographically smallest pair list (by row, then column) is returned.
[[nodiscard]] inline Assignment hungarian(const CostMatrix& cost) {
  const std::size_t R = cost.rows();
  const std::size_t C = cost.cols();
  for (std::size_t r = 0; r < R; ++r) {
    for (std::size_t c = 0; c < C; ++c) {
      if (!std::isfinite(cost(r, c))) throw InvalidArgument("hungarian: non-finite cost entry");
    }
  }

  std::vector<std::size_t> all_rows(R), all_cols(C);
  for (std::size_t i = 0; i < R; ++i) all_rows[i] = i;
  for (std::size_t j = 0; j < C; ++j) all_cols[j] = j;
  const double optimum = detail::min_matching_cost(cost, all_rows, all_cols);
  const std::size_t size = std::min(R, C);

  Assignment out;
  std::vector<std::size_t> free_cols = all_cols;
  double fixed = 0.0;
  for (std::size_t t = 0; t < R; ++t) {
    const std::vector<std::size_t> later_rows(all_rows.begin() + static_cast<std::ptrdiff_t>(t) + 1,
                                              all_rows.end());
    bool placed = false;
    for (std::size_t k = 0; k < free_cols.size() && !placed; ++k) {
      std::vector<std::size_t> rest = free_cols;
      rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(k));
      const std::size_t card = out.pairs.size() + 1 + std::min(later_rows.size(), rest.size());
      if (card != size) continue;
      const double cand =
          fixed + cost(t, free_cols[k]) + detail::min_matching_cost(cost, later_rows, rest);
      if (detail::same_cost(cand, optimum)) {
        out.pairs.emplace_back(t, free_cols[k]);
        fixed += cost(t, free_cols[k]);
        free_cols = std::move(rest);
        placed = true;
      }
    }
    if (!placed) out.unassigned.push_back(t);
  }
  out.total = 0.0;
  for (const auto& [r, c] : out.pairs) out.total += cost(r, c);
  return out;
}

// Azimuth in [-pi, pi) and pitch in (-pi/2, pi/2) pointing from `turret` to `boss`.
[[nodiscard]] inline TurretAngles aim_angles(Vec3 turret, Vec3 boss) {
  const Vec3 d = boss - turret;
  if (d.x == 0.0 && d.y == 0.0 && d.z == 0.0) {
    throw InvalidArgument("aim_angles: turret and boss positions coincide");
  }
  double az = std::atan2(d.y, d.x);
  if (az >= std::numbers::pi) az = -std::numbers::pi;
  return {az, std::atan2(d.z, std::hypot(d.x, d.y))};
}

// Strategy G. Pure function of the observation and the static layout: turrets
// are matched to live bosses by Euclidean distance and aim straight at their
// targets; unmatched turrets hold their current angles.
[[nodiscard]] inline ActionVector strategy_act(const Observation& obs,
                                               const TowerDefenseConfig& config) {
  const TowerDefenseWorld world = decode_state(obs.state, config);
  if (obs.alive.size() != config.bosses) {
    throw InvalidArgument("strategy_act: liveness mask size mismatch");
  }
  std::vector<std::size_t> live;
  for (std::size_t b = 0; b < config.bosses; ++b) {
    if (obs.alive[b]) live.push_back(b);
  }

  CostMatrix cost(config.turrets, live.size());
  for (std::size_t t = 0; t < config.turrets; ++t) {
    for (std::size_t k = 0; k < live.size(); ++k) {
      cost(t, k) = (world.boss_positions[live[k]] - world.turret_positions[t]).norm();
    }
  }
  const Assignment assignment = hungarian(cost);

  std::vector<double> action;
  action.reserve(2 * config.turrets);
  for (const auto& a : world.turret_angles) {
    action.push_back(a.azimuth);
    action.push_back(a.pitch);
  }
  for (const auto& [t, k] : assignment.pairs) {
    const TurretAngles aim = aim_angles(world.turret_positions[t], world.boss_positions[live[k]]);
    action[2 * t] = aim.azimuth;
    action[2 * t + 1] = aim.pitch;
  }
  return ActionVector(std::move(action));
}

// Callable wrapper so the same G instance drives every environment.
struct TowerStrategy {
  ActionVector operator()(const Observation& obs, const TowerDefenseConfig& config) const {
    return strategy_act(obs, config);
  }
};

}  // namespace dtwin
