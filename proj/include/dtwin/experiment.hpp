#pragma once

// Experiment configuration and per-iteration result rows.

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dtwin/core.hpp"
#include "dtwin/env.hpp"

namespace dtwin {

enum class Method { kPgfp, kPg, kGafp, kGa };

inline constexpr Method kAllMethods[] = {Method::kPgfp, Method::kGafp, Method::kPg, Method::kGa};

[[nodiscard]] constexpr std::string_view to_string(Method m) noexcept {
  switch (m) {
    case Method::kPgfp: return "pgfp";
    case Method::kPg: return "pg";
    case Method::kGafp: return "gafp";
    case Method::kGa: return "ga";
  }
  return "?";
}

[[nodiscard]] inline Method parse_method(std::string_view s) {
  for (Method m : kAllMethods) {
    if (to_string(m) == s) return m;
  }
  throw ConfigError("unknown method '" + std::string(s) + "' (expected pgfp, pg, gafp or ga)");
}

[[nodiscard]] constexpr bool uses_delta(Method m) noexcept {
  return m == Method::kPgfp || m == Method::kGafp;
}
[[nodiscard]] constexpr bool is_ga(Method m) noexcept {
  return m == Method::kGafp || m == Method::kGa;
}

struct GaSettings {
  std::size_t population = 30;
  double mutation_rate = 0.01;
  double crossover_rate = 0.7;
  double selection_rate = 0.5;
  double mutation_stddev = 0.1;
  double init_max = 1.5;  // initial members drawn from (0, init_max]^2
  std::size_t elite = 1;
};

// How the policy-gradient estimate becomes a parameter step.
//   sgd:     phi += alpha * g
//   natural: the same, with each score's Gaussian head Fisher-preconditioned
//   adam:    Adam moments on g
enum class PgOptimizer { kNatural, kSgd, kAdam };

[[nodiscard]] constexpr std::string_view to_string(PgOptimizer o) noexcept {
  switch (o) {
    case PgOptimizer::kNatural: return "natural";
    case PgOptimizer::kSgd: return "sgd";
    case PgOptimizer::kAdam: return "adam";
  }
  return "?";
}

struct ExperimentConfig {
  std::size_t horizon = 100;      // N
  std::size_t iterations = 200;   // Iter_max; 0 yields an empty log
  double learning_rate = 2e-2;    // alpha
  double lr_decay = 0.99;         // per-iteration multiplicative decay of alpha
  std::size_t batch_size = 16;    // K
  std::size_t hidden_units = 32;
  double init_stddev = 0.3;
  double output_init_scale = 0.01;  // multiplies the output layer's init range
  Method method = Method::kPgfp;
  std::uint64_t seed = 1;
  GaSettings ga{};
  TowerDefenseConfig environment{};
  std::optional<std::uint64_t> physical_budget;  // steps; unlimited when unset
  bool record_timing = false;  // wall_ms is written as 0 unless enabled
  PgOptimizer optimizer = PgOptimizer::kNatural;
  // Divide the baselined rewards by their batch standard deviation.
  bool normalize_advantages = true;

  void validate() const {
    if (horizon == 0) throw ConfigError("horizon must be positive");
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
      throw ConfigError("learning_rate must be positive");
    }
    if (!(lr_decay > 0.0 && lr_decay <= 1.0)) throw ConfigError("lr_decay must lie in (0, 1]");
    if (batch_size == 0) throw ConfigError("batch_size must be positive");
    if (hidden_units == 0) throw ConfigError("hidden_units must be positive");
    if (!(init_stddev > 0.0)) throw ConfigError("init_stddev must be positive");
    if (!(output_init_scale >= 0.0)) throw ConfigError("output_init_scale must be non-negative");
    if (uses_delta(method) && horizon < 2) {
      throw ConfigError("horizon must be at least 2 when delta preprocessing is used");
    }
    if (ga.population < 2) throw ConfigError("ga.population must be at least 2");
    auto unit = [](double r) { return r >= 0.0 && r <= 1.0; };
    if (!unit(ga.mutation_rate) || !unit(ga.crossover_rate) || !(ga.selection_rate > 0.0) ||
        ga.selection_rate > 1.0) {
      throw ConfigError("ga rates must lie in [0, 1] (selection in (0, 1])");
    }
    if (!(ga.mutation_stddev > 0.0)) throw ConfigError("ga.mutation_stddev must be positive");
    if (!(ga.init_max > 0.0)) throw ConfigError("ga.init_max must be positive");
    try {
      environment.validate();
    } catch (const InvalidArgument& e) {
      throw ConfigError(std::string("environment: ") + e.what());
    }
  }
};

// One row of the convergence log.
struct RunRecord {
  std::string method;
  std::uint64_t seed = 0;
  std::size_t iteration = 0;  // 1-based
  ParamVector prediction;     // point estimate of theta after this iteration
  double mean_mste = 0.0;     // mean MSTE over the iteration's candidates
  double param_mse = 0.0;     // param_mse(prediction, true theta)
  double wall_ms = 0.0;
};

}  // namespace dtwin
