#pragma once

// Calibration of the digital twin's parameters: score-function policy
// gradient (PGFP / PG) and a real-coded genetic algorithm (GAFP / GA).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>
#include <span>
#include <vector>

#include "dtwin/core.hpp"
#include "dtwin/env.hpp"
#include "dtwin/experiment.hpp"
#include "dtwin/policy.hpp"
#include "dtwin/rollout.hpp"
#include "dtwin/signal.hpp"

namespace dtwin {

// ---------------------------------------------------------------------------
// Feature pooling
// ---------------------------------------------------------------------------

// Per-dimension [means..., population stddevs..., mins..., maxs...] over the
// sequence; length 4 * dim regardless of sequence length.
[[nodiscard]] inline std::vector<double> features(std::span<const StateVector> seq) {
  if (seq.empty()) throw InvalidArgument("features: empty input sequence");
  const std::size_t d = seq.front().dim();
  const double n = static_cast<double>(seq.size());
  std::vector<double> out(4 * d, 0.0);
  for (std::size_t j = 0; j < d; ++j) {
    double sum = 0.0;
    double lo = seq.front()[j];
    double hi = lo;
    for (const auto& s : seq) {
      sum += s[j];
      lo = std::min(lo, s[j]);
      hi = std::max(hi, s[j]);
    }
    const double mean = sum / n;
    double var = 0.0;
    for (const auto& s : seq) var += (s[j] - mean) * (s[j] - mean);
    out[j] = mean;
    out[d + j] = std::sqrt(var / n);
    out[2 * d + j] = lo;
    out[3 * d + j] = hi;
  }
  return out;
}

[[nodiscard]] inline std::vector<double> features(const Trajectory& t) {
  return features(std::span<const StateVector>(t.states()));
}
[[nodiscard]] inline std::vector<double> features(const DeltaSequence& d) {
  return features(std::span<const StateVector>(d.deltas));
}

// ---------------------------------------------------------------------------
// Gaussian parameter policy
// ---------------------------------------------------------------------------

namespace detail {

inline double softplus(double x) noexcept {
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}
inline double sigmoid(double x) noexcept {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace detail

// Diagonal Gaussian over theta whose mean is produced by a one-hidden-layer
// tanh network of pooled sequence features:
//   h = tanh(W1 x + b1),  o = W2 h + b2,  mu = softplus(o),  sigma = exp(log_std).
//
// All trainable values live in one flat vector laid out as
//   [W1 (hidden x in, row-major) | b1 | W2 (out x hidden, row-major) | b2 | log_std].
class GaussianParameterPolicy {
 public:
  struct Forward {
    std::vector<double> hidden;  // h
    std::vector<double> logits;  // o
    std::vector<double> mean;    // mu
  };

  // Weights are drawn uniformly from +-sqrt(6 / (fan_in + fan_out)); the
  // output layer's range is further multiplied by `output_init_scale`, so a
  // small value starts the mean close to input-independent.
  GaussianParameterPolicy(std::size_t input_dim, std::size_t hidden_dim, std::size_t output_dim,
                          double init_stddev, SeedStream init, double output_init_scale = 1.0)
      : in_(input_dim), hidden_(hidden_dim), out_(output_dim),
        params_(hidden_dim * input_dim + hidden_dim + output_dim * hidden_dim + 2 * output_dim,
                0.0) {
    if (input_dim == 0 || hidden_dim == 0 || output_dim == 0) {
      throw InvalidArgument("GaussianParameterPolicy: dimensions must be positive");
    }
    if (!(init_stddev > 0.0)) throw InvalidArgument("GaussianParameterPolicy: init_stddev <= 0");
    if (!(output_init_scale >= 0.0)) throw InvalidArgument("GaussianParameterPolicy: output_init_scale < 0");
    StreamCursor rng(init);
    const double lim1 = std::sqrt(6.0 / static_cast<double>(in_ + hidden_));
    const double lim2 = output_init_scale * std::sqrt(6.0 / static_cast<double>(hidden_ + out_));
    for (std::size_t i = 0; i < hidden_ * in_; ++i) params_[w1() + i] = lim1 * (2.0 * rng.uniform() - 1.0);
    for (std::size_t i = 0; i < out_ * hidden_; ++i) params_[w2() + i] = lim2 * (2.0 * rng.uniform() - 1.0);
    for (std::size_t j = 0; j < out_; ++j) params_[log_std() + j] = std::log(init_stddev);
  }

  [[nodiscard]] std::size_t input_dim() const noexcept { return in_; }
  [[nodiscard]] std::size_t hidden_dim() const noexcept { return hidden_; }
  [[nodiscard]] std::size_t output_dim() const noexcept { return out_; }
  [[nodiscard]] std::size_t parameter_count() const noexcept { return params_.size(); }
  [[nodiscard]] std::span<const double> parameters() const noexcept { return params_; }

  void set_parameters(std::vector<double> p) {
    if (p.size() != params_.size()) throw InvalidArgument("set_parameters: size mismatch");
    params_ = std::move(p);
  }

  // Offsets into the flat parameter vector.
  [[nodiscard]] std::size_t w1() const noexcept { return 0; }
  [[nodiscard]] std::size_t b1() const noexcept { return hidden_ * in_; }
  [[nodiscard]] std::size_t w2() const noexcept { return b1() + hidden_; }
  [[nodiscard]] std::size_t b2() const noexcept { return w2() + out_ * hidden_; }
  [[nodiscard]] std::size_t log_std() const noexcept { return b2() + out_; }

  [[nodiscard]] Forward forward(std::span<const double> x) const {
    check_input(x);
    Forward f;
    f.hidden.resize(hidden_);
    for (std::size_t k = 0; k < hidden_; ++k) {
      double a = params_[b1() + k];
      const double* row = &params_[w1() + k * in_];
      for (std::size_t i = 0; i < in_; ++i) a += row[i] * x[i];
      f.hidden[k] = std::tanh(a);
    }
    f.logits.resize(out_);
    f.mean.resize(out_);
    for (std::size_t j = 0; j < out_; ++j) {
      double o = params_[b2() + j];
      const double* row = &params_[w2() + j * hidden_];
      for (std::size_t k = 0; k < hidden_; ++k) o += row[k] * f.hidden[k];
      f.logits[j] = o;
      f.mean[j] = detail::softplus(o);
    }
    return f;
  }

  [[nodiscard]] std::vector<double> mean(std::span<const double> x) const { return forward(x).mean; }

  [[nodiscard]] std::vector<double> stddev() const {
    std::vector<double> s(out_);
    for (std::size_t j = 0; j < out_; ++j) s[j] = std::exp(params_[log_std() + j]);
    return s;
  }

  [[nodiscard]] double log_density(std::span<const double> x, std::span<const double> theta) const {
    check_theta(theta);
    const Forward f = forward(x);
    double lp = 0.0;
    for (std::size_t j = 0; j < out_; ++j) {
      const double ls = params_[log_std() + j];
      const double z = (theta[j] - f.mean[j]) * std::exp(-ls);
      lp += -0.5 * z * z - ls - 0.5 * std::log(2.0 * std::numbers::pi);
    }
    return lp;
  }

  // Analytic gradient of log_density with respect to every trainable value,
  // in parameter-vector layout.
  [[nodiscard]] std::vector<double> log_density_grad(std::span<const double> x,
                                                     std::span<const double> theta) const {
    return score(x, theta, false);
  }

  // The same gradient with the Gaussian head preconditioned by its Fisher
  // information: the mean's output gradient is multiplied by sigma^2 and the
  // log-stddev gradient by 1/2. Step sizes then no longer blow up as sigma
  // shrinks.
  [[nodiscard]] std::vector<double> fisher_scaled_grad(std::span<const double> x,
                                                       std::span<const double> theta) const {
    return score(x, theta, true);
  }

 private:
  [[nodiscard]] std::vector<double> score(std::span<const double> x, std::span<const double> theta,
                                          bool fisher) const {
    check_theta(theta);
    const Forward f = forward(x);
    std::vector<double> g(params_.size(), 0.0);

    std::vector<double> g_logit(out_);
    for (std::size_t j = 0; j < out_; ++j) {
      const double ls = params_[log_std() + j];
      const double inv_var = std::exp(-2.0 * ls);
      const double r = theta[j] - f.mean[j];
      g[log_std() + j] = fisher ? 0.5 * (r * r * inv_var - 1.0) : r * r * inv_var - 1.0;
      g_logit[j] = (fisher ? r : r * inv_var) * detail::sigmoid(f.logits[j]);
      g[b2() + j] = g_logit[j];
      for (std::size_t k = 0; k < hidden_; ++k) g[w2() + j * hidden_ + k] = g_logit[j] * f.hidden[k];
    }
    for (std::size_t k = 0; k < hidden_; ++k) {
      double gh = 0.0;
      for (std::size_t j = 0; j < out_; ++j) gh += params_[w2() + j * hidden_ + k] * g_logit[j];
      const double ga = gh * (1.0 - f.hidden[k] * f.hidden[k]);
      g[b1() + k] = ga;
      for (std::size_t i = 0; i < in_; ++i) g[w1() + k * in_ + i] = ga * x[i];
    }
    return g;
  }

  void check_input(std::span<const double> x) const {
    if (x.size() != in_) throw InvalidArgument("policy: feature dimension mismatch");
  }
  void check_theta(std::span<const double> theta) const {
    if (theta.size() != out_) throw InvalidArgument("policy: theta dimension mismatch");
    for (double t : theta) {
      if (!std::isfinite(t)) throw InvalidArgument("policy: non-finite theta");
    }
  }

  std::size_t in_;
  std::size_t hidden_;
  std::size_t out_;
  std::vector<double> params_;
};

inline constexpr double kThetaFloor = 1e-3;

struct ThetaSample {
  ParamVector theta;              // clamped to >= kThetaFloor, handed to the twin
  std::vector<double> raw;        // the Gaussian draw before clamping
  double log_density = 0.0;       // evaluated at `raw`
};

[[nodiscard]] inline ThetaSample sample_theta(const GaussianParameterPolicy& policy,
                                              std::span<const double> x, SeedStream stream) {
  const auto mu = policy.mean(x);
  const auto sd = policy.stddev();
  StreamCursor rng(stream);
  ThetaSample s;
  s.raw.resize(mu.size());
  std::vector<double> clamped(mu.size());
  for (std::size_t j = 0; j < mu.size(); ++j) {
    s.raw[j] = rng.gaussian(mu[j], sd[j]);
    clamped[j] = std::max(s.raw[j], kThetaFloor);
  }
  s.theta = ParamVector(std::move(clamped));
  s.log_density = policy.log_density(x, s.raw);
  return s;
}

struct RewardRecord {
  ParamVector theta;
  double cost = 0.0;                // MSTE of the rollout pair
  double reward = 0.0;              // -cost
  std::vector<double> score;        // gradient of log-density at the raw draw
};

// Score-function estimate of the reward gradient:
//   sum_k (reward_k - baseline) * score_k,
// with baseline = mean batch reward (0 for a batch of one). When `normalize`
// is set the centered rewards are divided by their batch standard deviation.
[[nodiscard]] inline std::vector<double> policy_gradient(std::span<const RewardRecord> batch,
                                                         bool normalize = false) {
  if (batch.empty()) throw InvalidArgument("pg_update: empty batch");
  const std::size_t n = batch.front().score.size();
  // The mean is accumulated as offsets from the first reward so that a batch
  // of equal rewards yields a baseline equal to that reward bit for bit.
  double baseline = 0.0;
  if (batch.size() > 1) {
    const double first = batch.front().reward;
    double offset = 0.0;
    for (const auto& r : batch) offset += r.reward - first;
    baseline = first + offset / static_cast<double>(batch.size());
  }
  double scale = 1.0;
  if (normalize && batch.size() > 1) {
    double var = 0.0;
    for (const auto& r : batch) var += (r.reward - baseline) * (r.reward - baseline);
    var /= static_cast<double>(batch.size());
    if (var > 0.0) scale = 1.0 / std::sqrt(var);
  }
  std::vector<double> g(n, 0.0);
  for (const auto& r : batch) {
    if (r.score.size() != n) throw InvalidArgument("pg_update: score size mismatch");
    const double w = scale * (r.reward - baseline);
    if (w == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) g[i] += w * r.score[i];
  }
  return g;
}

// phi <- phi + alpha * sum_k (reward_k - baseline) * score_k.
[[nodiscard]] inline GaussianParameterPolicy pg_update(GaussianParameterPolicy policy,
                                                       std::span<const RewardRecord> batch,
                                                       double alpha) {
  const std::vector<double> g = policy_gradient(batch);
  if (g.size() != policy.parameter_count()) throw InvalidArgument("pg_update: score size mismatch");
  std::vector<double> p(policy.parameters().begin(), policy.parameters().end());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] += alpha * g[i];
  policy.set_parameters(std::move(p));
  return policy;
}

// Adam moment estimates for gradient ascent on the policy parameters.
class AdamAscent {
 public:
  explicit AdamAscent(std::size_t n, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8)
      : m_(n, 0.0), v_(n, 0.0), beta1_(beta1), beta2_(beta2), eps_(eps) {}

  [[nodiscard]] GaussianParameterPolicy step(GaussianParameterPolicy policy,
                                             std::span<const double> grad, double alpha) {
    if (grad.size() != m_.size() || policy.parameter_count() != m_.size()) {
      throw InvalidArgument("AdamAscent: size mismatch");
    }
    ++t_;
    const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
    std::vector<double> p(policy.parameters().begin(), policy.parameters().end());
    for (std::size_t i = 0; i < p.size(); ++i) {
      m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * grad[i];
      v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * grad[i] * grad[i];
      p[i] += alpha * (m_[i] / c1) / (std::sqrt(v_[i] / c2) + eps_);
    }
    policy.set_parameters(std::move(p));
    return policy;
  }

 private:
  std::vector<double> m_;
  std::vector<double> v_;
  double beta1_;
  double beta2_;
  double eps_;
  std::uint64_t t_ = 0;
};

// ---------------------------------------------------------------------------
// Genetic algorithm
// ---------------------------------------------------------------------------

struct GaPopulation {
  std::vector<ParamVector> members;
  std::vector<double> fitness;  // empty until evaluated; higher is better
};

[[nodiscard]] inline GaPopulation ga_initial_population(const GaSettings& ga, std::size_t dim,
                                                        SeedStream stream) {
  StreamCursor rng(stream);
  GaPopulation pop;
  for (std::size_t m = 0; m < ga.population; ++m) {
    std::vector<double> v(dim);
    for (auto& x : v) x = std::max(ga.init_max * (1.0 - rng.uniform()), kThetaFloor);
    pop.members.emplace_back(std::move(v));
  }
  return pop;
}

inline void evaluate(GaPopulation& pop, const std::function<double(const ParamVector&)>& fitness) {
  pop.fitness.resize(pop.members.size());
  for (std::size_t m = 0; m < pop.members.size(); ++m) pop.fitness[m] = fitness(pop.members[m]);
}

// Member indices by descending fitness, ties by index.
[[nodiscard]] inline std::vector<std::size_t> ranked(const GaPopulation& pop) {
  std::vector<std::size_t> order(pop.members.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return pop.fitness[a] > pop.fitness[b]; });
  return order;
}

// One reproduction cycle. The top ceil(selection_rate * size) members survive
// unchanged (so the best member is always carried over); offspring refill the
// population from pairs of distinct survivors via arithmetic crossover and
// per-gene Gaussian mutation.
[[nodiscard]] inline GaPopulation ga_generation(const GaPopulation& pop, const GaSettings& ga,
                                                SeedStream stream) {
  if (pop.members.size() != ga.population) {
    throw InvalidArgument("ga_generation: population size " + std::to_string(pop.members.size()) +
                          ", expected " + std::to_string(ga.population));
  }
  if (pop.fitness.size() != pop.members.size()) {
    throw InvalidArgument("ga_generation: population has not been evaluated");
  }
  const std::size_t survivors = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::ceil(ga.selection_rate * static_cast<double>(ga.population) - 1e-9)),
      std::max<std::size_t>(ga.elite, 1), ga.population);

  const auto order = ranked(pop);
  GaPopulation next;
  next.members.reserve(ga.population);
  for (std::size_t i = 0; i < survivors; ++i) next.members.push_back(pop.members[order[i]]);

  StreamCursor rng(stream);
  const std::size_t dim = pop.members.front().dim();
  while (next.members.size() < ga.population) {
    const std::size_t i1 = rng.index(survivors);
    std::size_t i2 = i1;
    if (survivors > 1) {
      i2 = rng.index(survivors - 1);
      if (i2 >= i1) ++i2;
    }
    const ParamVector& p1 = next.members[i1];
    const ParamVector& p2 = next.members[i2];
    std::vector<double> child(p1.begin(), p1.end());
    if (rng.uniform() < ga.crossover_rate) {
      for (std::size_t j = 0; j < dim; ++j) {
        const double w = rng.uniform();
        child[j] = w * p1[j] + (1.0 - w) * p2[j];
      }
    }
    for (auto& gene : child) {
      if (rng.uniform() < ga.mutation_rate) gene += rng.gaussian(0.0, ga.mutation_stddev);
      gene = std::max(gene, kThetaFloor);
    }
    next.members.emplace_back(std::move(child));
  }
  return next;
}

// ---------------------------------------------------------------------------
// Training loops
// ---------------------------------------------------------------------------

// Stream for the physical episode of iteration `it`; digital rollouts of the
// same iteration reuse it.
[[nodiscard]] inline SeedStream episode_stream(SeedStream root, std::size_t it) {
  return role_stream(root, StreamRole::kEnvironmentNoise).child(it);
}

namespace detail {

class Stopwatch {
 public:
  explicit Stopwatch(bool enabled) : enabled_(enabled), start_(std::chrono::steady_clock::now()) {}
  [[nodiscard]] double elapsed_ms() const {
    if (!enabled_) return 0.0;
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  bool enabled_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace detail

// Policy-gradient calibration. Each iteration rolls out the strategy on the
// physical system, pools features of its delta sequence (pgfp) or raw states
// (pg), samples K candidate parameter vectors, scores each by the MSTE of a
// digital rollout under common random numbers and takes one gradient step.
template <Strategy G>
[[nodiscard]] std::vector<RunRecord> run_pg(const ExperimentConfig& cfg, PhysicalHandle& physical,
                                            TowerDefenseEnv& digital, const G& strategy) {
  if (is_ga(cfg.method)) throw InvalidArgument("run_pg: method must be pgfp or pg");
  cfg.validate();
  const bool delta = uses_delta(cfg.method);
  const SeedStream root(cfg.seed, 0);
  const std::size_t n = cfg.horizon;
  const std::size_t state_dim = cfg.environment.state_dim();

  GaussianParameterPolicy policy(4 * state_dim, cfg.hidden_units, 2, cfg.init_stddev,
                                 role_stream(root, StreamRole::kPolicyInit), cfg.output_init_scale);
  const bool natural = cfg.optimizer == PgOptimizer::kNatural;
  AdamAscent adam(policy.parameter_count());
  std::vector<RunRecord> records;
  records.reserve(cfg.iterations);
  double alpha = cfg.learning_rate;

  for (std::size_t it = 1; it <= cfg.iterations; ++it) {
    detail::Stopwatch clock(cfg.record_timing);
    const SeedStream env_stream = episode_stream(root, it);
    const Trajectory phys = rollout(physical, strategy, n, env_stream);
    const std::vector<double> x = delta ? features(delta_preprocess(phys)) : features(phys);

    const SeedStream sample_stream = role_stream(root, StreamRole::kPolicySampling).child(it);
    std::vector<RewardRecord> batch;
    batch.reserve(cfg.batch_size);
    double mste_sum = 0.0;
    for (std::size_t k = 0; k < cfg.batch_size; ++k) {
      ThetaSample s = sample_theta(policy, x, sample_stream.child(k));
      digital.set_params(s.theta);
      const Trajectory dig = rollout(digital, strategy, n, env_stream);
      const double cost = mste(phys, dig);
      mste_sum += cost;
      batch.push_back({s.theta, cost, -cost,
                       natural ? policy.fisher_scaled_grad(x, s.raw) : policy.log_density_grad(x, s.raw)});
    }
    if (cfg.optimizer == PgOptimizer::kAdam) {
      policy = adam.step(std::move(policy), policy_gradient(batch, cfg.normalize_advantages), alpha);
    } else if (natural || cfg.normalize_advantages) {
      const auto g = policy_gradient(batch, cfg.normalize_advantages);
      std::vector<double> p(policy.parameters().begin(), policy.parameters().end());
      for (std::size_t i = 0; i < p.size(); ++i) p[i] += alpha * g[i];
      policy.set_parameters(std::move(p));
    } else {
      policy = pg_update(std::move(policy), batch, alpha);
    }
    alpha *= cfg.lr_decay;

    ParamVector prediction(policy.mean(x));
    RunRecord rec;
    rec.method = std::string(to_string(cfg.method));
    rec.seed = cfg.seed;
    rec.iteration = it;
    rec.param_mse = param_mse(prediction, cfg.environment.true_theta);
    rec.prediction = std::move(prediction);
    rec.mean_mste = mste_sum / static_cast<double>(cfg.batch_size);
    rec.wall_ms = clock.elapsed_ms();
    records.push_back(std::move(rec));
  }
  return records;
}

// GA calibration. Fitness of a member is -MSTE between the physical rollout
// and the digital rollout under that member, compared on delta sequences
// (gafp) or raw trajectories (ga). One record per reproduction cycle; the
// point prediction is the best member of the evaluated population.
template <Strategy G>
[[nodiscard]] std::vector<RunRecord> run_ga(const ExperimentConfig& cfg, PhysicalHandle& physical,
                                            TowerDefenseEnv& digital, const G& strategy) {
  if (!is_ga(cfg.method)) throw InvalidArgument("run_ga: method must be gafp or ga");
  cfg.validate();
  const bool delta = uses_delta(cfg.method);
  const SeedStream root(cfg.seed, 0);
  const std::size_t n = cfg.horizon;

  GaPopulation pop = ga_initial_population(cfg.ga, 2, role_stream(root, StreamRole::kGaInit));
  std::vector<RunRecord> records;
  records.reserve(cfg.iterations);

  for (std::size_t it = 1; it <= cfg.iterations; ++it) {
    detail::Stopwatch clock(cfg.record_timing);
    const SeedStream env_stream = episode_stream(root, it);
    const Trajectory phys = rollout(physical, strategy, n, env_stream);
    const DeltaSequence phys_delta = delta ? delta_preprocess(phys) : DeltaSequence{};

    double mste_sum = 0.0;
    evaluate(pop, [&](const ParamVector& theta) {
      digital.set_params(theta);
      const Trajectory dig = rollout(digital, strategy, n, env_stream);
      const double cost = delta ? mste(phys_delta, delta_preprocess(dig)) : mste(phys, dig);
      mste_sum += cost;
      return -cost;
    });

    const auto order = ranked(pop);
    RunRecord rec;
    rec.method = std::string(to_string(cfg.method));
    rec.seed = cfg.seed;
    rec.iteration = it;
    rec.prediction = pop.members[order.front()];
    rec.param_mse = param_mse(rec.prediction, cfg.environment.true_theta);
    rec.mean_mste = mste_sum / static_cast<double>(pop.members.size());

    pop = ga_generation(pop, cfg.ga, role_stream(root, StreamRole::kGaVariation).child(it));
    rec.wall_ms = clock.elapsed_ms();
    records.push_back(std::move(rec));
  }
  return records;
}

// Builds the physical/digital pair from the configuration and dispatches on
// the configured method.
[[nodiscard]] inline std::vector<RunRecord> run_method(const ExperimentConfig& cfg) {
  cfg.validate();
  PhysicalHandle physical(cfg.environment, cfg.physical_budget);
  TowerDefenseEnv digital(without_parameters(cfg.environment));
  const TowerStrategy strategy;
  return is_ga(cfg.method) ? run_ga(cfg, physical, digital, strategy)
                           : run_pg(cfg, physical, digital, strategy);
}

}  // namespace dtwin
