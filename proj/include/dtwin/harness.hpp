#pragma once

// Benchmark orchestration: every requested method on every seed, with the
// physical episodes of seed i shared across methods.

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dtwin/estimators.hpp"
#include "dtwin/experiment.hpp"

namespace dtwin {

struct BenchmarkConfig {
  ExperimentConfig experiment{};
  std::vector<Method> methods{std::begin(kAllMethods), std::end(kAllMethods)};
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
};

struct RecordSeries {
  Method method = Method::kPgfp;
  std::uint64_t seed = 0;
  std::vector<RunRecord> records;
};

struct MethodSummary {
  Method method = Method::kPgfp;
  double final_param_mse_mean = 0.0;
  double final_param_mse_std = 0.0;    // population std across seeds
  std::vector<double> final_theta_mean;
  std::size_t seeds = 0;
};

struct BenchmarkResult {
  std::vector<RecordSeries> series;
  std::vector<MethodSummary> summary;

  [[nodiscard]] const MethodSummary* find(Method m) const {
    for (const auto& s : summary) {
      if (s.method == m) return &s;
    }
    return nullptr;
  }
};

// Window (in iterations) for the end-of-run stability statistic.
inline constexpr std::size_t kTraceWindow = 50;

// Mean of the per-coordinate population standard deviations of the point
// prediction over the last `window` records (all records if fewer).
[[nodiscard]] inline double trace_stddev(const std::vector<RunRecord>& records, std::size_t window) {
  if (records.empty()) return 0.0;
  const std::size_t n = std::min(window, records.size());
  const std::size_t first = records.size() - n;
  const std::size_t dim = records.front().prediction.dim();
  double total = 0.0;
  for (std::size_t j = 0; j < dim; ++j) {
    double mean = 0.0;
    for (std::size_t i = first; i < records.size(); ++i) mean += records[i].prediction[j];
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (std::size_t i = first; i < records.size(); ++i) {
      const double d = records[i].prediction[j] - mean;
      var += d * d;
    }
    total += std::sqrt(var / static_cast<double>(n));
  }
  return total / static_cast<double>(dim);
}

[[nodiscard]] inline std::vector<MethodSummary> summarize(const std::vector<RecordSeries>& series) {
  std::vector<MethodSummary> out;
  for (Method m : kAllMethods) {
    std::vector<const RecordSeries*> mine;
    for (const auto& s : series) {
      if (s.method == m && !s.records.empty()) mine.push_back(&s);
    }
    if (mine.empty()) continue;
    MethodSummary sum;
    sum.method = m;
    sum.seeds = mine.size();
    const double n = static_cast<double>(mine.size());
    const std::size_t dim = mine.front()->records.back().prediction.dim();
    sum.final_theta_mean.assign(dim, 0.0);
    for (const auto* s : mine) {
      sum.final_param_mse_mean += s->records.back().param_mse;
      for (std::size_t j = 0; j < dim; ++j) sum.final_theta_mean[j] += s->records.back().prediction[j];
    }
    sum.final_param_mse_mean /= n;
    for (auto& t : sum.final_theta_mean) t /= n;
    double var = 0.0;
    for (const auto* s : mine) {
      const double d = s->records.back().param_mse - sum.final_param_mse_mean;
      var += d * d;
    }
    sum.final_param_mse_std = std::sqrt(var / n);
    out.push_back(std::move(sum));
  }
  return out;
}

struct Verdicts {
  std::optional<bool> pgfp_beats_all;   // PGFP mean final param_mse below every other method run
  std::optional<bool> pg_family_fp;     // PGFP below PG
  std::optional<bool> ga_family_fp;     // GAFP below GA
  std::optional<bool> fp_beats_nofp;    // both of the above
};

[[nodiscard]] inline Verdicts verdicts(const BenchmarkResult& r) {
  Verdicts v;
  const auto* pgfp = r.find(Method::kPgfp);
  const auto* pg = r.find(Method::kPg);
  const auto* gafp = r.find(Method::kGafp);
  const auto* ga = r.find(Method::kGa);
  if (pgfp && r.summary.size() > 1) {
    bool all = true;
    for (const auto& s : r.summary) {
      if (s.method != Method::kPgfp && !(pgfp->final_param_mse_mean < s.final_param_mse_mean)) all = false;
    }
    v.pgfp_beats_all = all;
  }
  if (pgfp && pg) v.pg_family_fp = pgfp->final_param_mse_mean < pg->final_param_mse_mean;
  if (gafp && ga) v.ga_family_fp = gafp->final_param_mse_mean < ga->final_param_mse_mean;
  if (v.pg_family_fp && v.ga_family_fp) v.fp_beats_nofp = *v.pg_family_fp && *v.ga_family_fp;
  return v;
}

[[nodiscard]] inline BenchmarkResult run_benchmark(const BenchmarkConfig& cfg) {
  if (cfg.methods.empty()) throw ConfigError("benchmark: at least one method is required");
  if (cfg.seeds.empty()) throw ConfigError("benchmark: at least one seed is required");
  BenchmarkResult result;
  for (Method m : cfg.methods) {
    for (std::uint64_t seed : cfg.seeds) {
      ExperimentConfig cell = cfg.experiment;
      cell.method = m;
      cell.seed = seed;
      result.series.push_back({m, seed, run_method(cell)});
    }
  }
  result.summary = summarize(result.series);
  return result;
}

}  // namespace dtwin
