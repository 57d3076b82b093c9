#pragma once

// Closed-loop interaction of the strategy with an environment.

#include <utility>

#include "dtwin/core.hpp"
#include "dtwin/env.hpp"

namespace dtwin {

template <class S>
concept Strategy = requires(const S g, const Observation& obs, const TowerDefenseConfig& cfg) {
  { g(obs, cfg) } -> std::same_as<ActionVector>;
};

// N-state trajectory: the initial state from stream.child(0), then N-1 steps
// where step i draws its noise from stream.child(i). Two environments rolled
// out with the same stream see the same initial state and noise.
template <ParametricEnvironment E, Strategy G>
[[nodiscard]] Trajectory rollout(E& env, const G& strategy, std::size_t n, SeedStream stream) {
  Trajectory traj;
  if (n == 0) return traj;
  StateVector s = env.reset(stream.child(0));
  traj.push_back(s);
  for (std::size_t i = 1; i < n; ++i) {
    const ActionVector a = strategy(env.observe(), env.config());
    s = env.step(s, a, stream.child(i));
    traj.push_back(s);
  }
  return traj;
}

// Runs the same strategy against both environments with common random
// numbers. Each loop is closed on its own states.
template <ParametricEnvironment P, ParametricEnvironment D, Strategy G>
[[nodiscard]] std::pair<Trajectory, Trajectory> rollout_pair(P& physical, D& digital,
                                                             const G& strategy, std::size_t n,
                                                             SeedStream stream) {
  Trajectory phys = rollout(physical, strategy, n, stream);
  Trajectory dig = rollout(digital, strategy, n, stream);
  return {std::move(phys), std::move(dig)};
}

}  // namespace dtwin
