#pragma once

// Twin-fidelity metrics and the adjacent-difference feature transform.

#include <cmath>
#include <span>
#include <vector>

#include "dtwin/core.hpp"

namespace dtwin {

// Element i holds states[i+1] - states[i].
struct DeltaSequence {
  std::vector<StateVector> deltas;

  [[nodiscard]] std::size_t length() const noexcept { return deltas.size(); }
  [[nodiscard]] bool empty() const noexcept { return deltas.empty(); }
};

namespace detail {

inline double l2_distance(const StateVector& a, const StateVector& b) {
  double acc = 0.0;
  for (std::size_t j = 0; j < a.dim(); ++j) {
    const double d = a[j] - b[j];
    acc += d * d;
  }
  return std::sqrt(acc);
}

inline double sum_of_distances(std::span<const StateVector> a, std::span<const StateVector> b) {
  if (a.size() != b.size()) throw InvalidArgument("mste: sequence lengths differ");
  double total = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].dim() != b[i].dim()) throw InvalidArgument("mste: state dimensions differ");
    total += l2_distance(a[i], b[i]);
  }
  return total;
}

}  // namespace detail

// Sum over steps of the Euclidean distance between paired states. Not
// divided by N.
[[nodiscard]] inline double mste(const Trajectory& physical, const Trajectory& digital) {
  return detail::sum_of_distances(physical.states(), digital.states());
}

// Same sum taken over two delta sequences.
[[nodiscard]] inline double mste(const DeltaSequence& physical, const DeltaSequence& digital) {
  return detail::sum_of_distances(physical.deltas, digital.deltas);
}

[[nodiscard]] inline DeltaSequence delta_preprocess(const Trajectory& t) {
  if (t.empty()) throw InvalidArgument("delta_preprocess: empty trajectory");
  DeltaSequence out;
  out.deltas.reserve(t.length() - 1);
  for (std::size_t i = 0; i + 1 < t.length(); ++i) {
    std::vector<double> d(t.dim());
    for (std::size_t j = 0; j < t.dim(); ++j) d[j] = t[i + 1][j] - t[i][j];
    out.deltas.emplace_back(std::move(d));
  }
  return out;
}

[[nodiscard]] inline double param_mse(const ParamVector& predicted, const ParamVector& truth) {
  if (predicted.dim() != truth.dim()) throw InvalidArgument("param_mse: dimension mismatch");
  if (predicted.empty()) return 0.0;
  double acc = 0.0;
  for (std::size_t j = 0; j < predicted.dim(); ++j) {
    const double d = predicted[j] - truth[j];
    acc += d * d;
  }
  return acc / static_cast<double>(predicted.dim());
}

}  // namespace dtwin
