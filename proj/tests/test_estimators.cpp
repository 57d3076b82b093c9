#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "dtwin/estimators.hpp"

namespace dtwin {
namespace {

GaussianParameterPolicy small_policy(std::uint64_t seed = 1, double sd = 0.3) {
  return GaussianParameterPolicy(4, 6, 2, sd, SeedStream(seed, 0));
}

TEST(Features, ScalarExample) {
  const Trajectory t({StateVector{2.0}, StateVector{3.0}});
  EXPECT_EQ(features(t), (std::vector<double>{2.5, 0.5, 2.0, 3.0}));
}

TEST(Features, ConstantSequence) {
  const Trajectory t({StateVector{4.0, -1.0}, StateVector{4.0, -1.0}, StateVector{4.0, -1.0}});
  EXPECT_EQ(features(t), (std::vector<double>{4, -1, 0, 0, 4, -1, 4, -1}));
}

TEST(Features, LengthIsFourTimesDim) {
  Trajectory t;
  for (int i = 0; i < 7; ++i) t.push_back(StateVector{1.0 * i, 2.0, 3.0});
  EXPECT_EQ(features(t).size(), 12u);
  EXPECT_EQ(features(delta_preprocess(t)).size(), 12u);
}

TEST(Features, EmptyInputRejected) {
  EXPECT_THROW((void)features(Trajectory{}), InvalidArgument);
  EXPECT_THROW((void)features(DeltaSequence{}), InvalidArgument);
}

TEST(Policy, ParameterLayout) {
  const auto p = small_policy();
  EXPECT_EQ(p.parameter_count(), 6u * 4 + 6 + 2 * 6 + 2 + 2);
  EXPECT_EQ(p.log_std(), p.parameter_count() - 2);
  for (double s : p.stddev()) EXPECT_NEAR(s, 0.3, 1e-15);
}

TEST(Policy, GlorotRangesAndZeroBiases) {
  const GaussianParameterPolicy p(10, 32, 2, 0.3, SeedStream(3, 0));
  const auto w = p.parameters();
  const double lim1 = std::sqrt(6.0 / 42.0);
  const double lim2 = std::sqrt(6.0 / 34.0);
  for (std::size_t i = p.w1(); i < p.b1(); ++i) EXPECT_LE(std::abs(w[i]), lim1);
  for (std::size_t i = p.b1(); i < p.w2(); ++i) EXPECT_EQ(w[i], 0.0);
  for (std::size_t i = p.w2(); i < p.b2(); ++i) EXPECT_LE(std::abs(w[i]), lim2);
  for (std::size_t i = p.b2(); i < p.log_std(); ++i) EXPECT_EQ(w[i], 0.0);
}

TEST(Policy, OutputInitScaleShrinksOnlyTheOutputLayer) {
  const GaussianParameterPolicy full(10, 8, 2, 0.3, SeedStream(3, 0), 1.0);
  const GaussianParameterPolicy small(10, 8, 2, 0.3, SeedStream(3, 0), 0.01);
  for (std::size_t i = full.w1(); i < full.b1(); ++i) EXPECT_EQ(full.parameters()[i], small.parameters()[i]);
  for (std::size_t i = full.w2(); i < full.b2(); ++i) {
    EXPECT_NEAR(small.parameters()[i], 0.01 * full.parameters()[i], 1e-15);
  }
}

TEST(Policy, MeanIsPositive) {
  const auto p = small_policy();
  for (double m : p.mean(std::vector<double>{100, -100, 50, 3})) EXPECT_GT(m, 0.0);
}

TEST(Policy, LogDensityAtModeIsClosedForm) {
  const auto p = small_policy(2, 0.4);
  const std::vector<double> x{0.1, 0.2, -0.3, 0.4};
  const auto mu = p.mean(x);
  const double expected = -2.0 * (std::log(0.4) + 0.5 * std::log(2.0 * std::numbers::pi));
  EXPECT_NEAR(p.log_density(x, mu), expected, 1e-12);
}

TEST(Policy, ScoreOfOutputBiasVanishesAtTheMean) {
  const auto p = small_policy(4);
  const std::vector<double> x{1, 2, 3, 4};
  const auto g = p.log_density_grad(x, p.mean(x));
  EXPECT_EQ(g[p.b2()], 0.0);
  EXPECT_EQ(g[p.b2() + 1], 0.0);
  EXPECT_DOUBLE_EQ(g[p.log_std()], -1.0);
}

TEST(Policy, FisherScaledGradientRelation) {
  const auto p = small_policy(5, 0.5);
  const std::vector<double> x{0.5, -0.5, 1.0, 0.0};
  const std::vector<double> theta{0.9, 0.1};
  const auto g = p.log_density_grad(x, theta);
  const auto f = p.fisher_scaled_grad(x, theta);
  for (std::size_t j = 0; j < 2; ++j) {
    EXPECT_NEAR(f[p.b2() + j], 0.25 * g[p.b2() + j], 1e-14);
    EXPECT_NEAR(f[p.log_std() + j], 0.5 * g[p.log_std() + j], 1e-14);
  }
}

TEST(Policy, RejectsBadShapes) {
  const auto p = small_policy();
  EXPECT_THROW((void)p.mean(std::vector<double>{1, 2}), InvalidArgument);
  EXPECT_THROW((void)p.log_density(std::vector<double>{1, 2, 3, 4}, std::vector<double>{1}), InvalidArgument);
  EXPECT_THROW((void)p.log_density_grad(std::vector<double>{1, 2, 3, 4}, std::vector<double>{1, NAN}),
               InvalidArgument);
}

TEST(SampleTheta, IdenticalStreamsIdenticalDraws) {
  const auto p = small_policy();
  const std::vector<double> x{1, 0, 1, 0};
  const ThetaSample a = sample_theta(p, x, SeedStream(8, 1));
  const ThetaSample b = sample_theta(p, x, SeedStream(8, 1));
  EXPECT_EQ(a.theta, b.theta);
  EXPECT_EQ(a.raw, b.raw);
  EXPECT_EQ(a.log_density, b.log_density);
}

TEST(SampleTheta, TinyStddevReturnsMean) {
  const auto p = small_policy(1, 1e-9);
  const std::vector<double> x{1, 0, 1, 0};
  const auto mu = p.mean(x);
  const ThetaSample s = sample_theta(p, x, SeedStream(8, 1));
  EXPECT_NEAR(s.theta[0], mu[0], 1e-7);
  EXPECT_NEAR(s.theta[1], mu[1], 1e-7);
}

TEST(SampleTheta, ClampsToFloorButScoresRawDraw) {
  // Mean near softplus(0) = 0.69 and a huge stddev: some draws go negative.
  const auto p = small_policy(1, 5.0);
  const std::vector<double> x{0, 0, 0, 0};
  bool saw_clamp = false;
  for (std::uint64_t k = 0; k < 50; ++k) {
    const ThetaSample s = sample_theta(p, x, SeedStream(2, k));
    for (std::size_t j = 0; j < 2; ++j) {
      EXPECT_GE(s.theta[j], kThetaFloor);
      if (s.raw[j] < kThetaFloor) {
        saw_clamp = true;
        EXPECT_EQ(s.theta[j], kThetaFloor);
      }
    }
    EXPECT_DOUBLE_EQ(s.log_density, p.log_density(x, s.raw));
  }
  EXPECT_TRUE(saw_clamp);
}

std::vector<RewardRecord> batch_with_rewards(const GaussianParameterPolicy& p, const std::vector<double>& rewards) {
  const std::vector<double> x{0.2, 0.4, 0.6, 0.8};
  std::vector<RewardRecord> batch;
  for (std::size_t k = 0; k < rewards.size(); ++k) {
    const ThetaSample s = sample_theta(p, x, SeedStream(4, k));
    batch.push_back({s.theta, -rewards[k], rewards[k], p.log_density_grad(x, s.raw)});
  }
  return batch;
}

TEST(PgUpdate, EqualRewardsGiveZeroUpdate) {
  const auto p = small_policy();
  const auto batch = batch_with_rewards(p, std::vector<double>(16, -0.1));
  const auto q = pg_update(p, batch, 0.5);
  EXPECT_TRUE(std::equal(p.parameters().begin(), p.parameters().end(), q.parameters().begin()));
}

TEST(PgUpdate, SingleRecordUsesRewardTimesScore) {
  const auto p = small_policy();
  const auto batch = batch_with_rewards(p, {-2.0});
  const double alpha = 0.01;
  const auto q = pg_update(p, batch, alpha);
  for (std::size_t i = 0; i < p.parameter_count(); ++i) {
    EXPECT_DOUBLE_EQ(q.parameters()[i], p.parameters()[i] + alpha * -2.0 * batch[0].score[i]);
  }
}

TEST(PgUpdate, ZeroStepLeavesPolicyUnchanged) {
  const auto p = small_policy();
  const auto batch = batch_with_rewards(p, {-1.0, -3.0, -2.0});
  const auto q = pg_update(p, batch, 0.0);
  EXPECT_TRUE(std::equal(p.parameters().begin(), p.parameters().end(), q.parameters().begin()));
}

TEST(PgUpdate, EmptyBatchRejected) {
  EXPECT_THROW((void)pg_update(small_policy(), std::vector<RewardRecord>{}, 0.1), InvalidArgument);
}

TEST(PgUpdate, StepMovesMeanTowardBetterSample) {
  // Two samples; the one with the higher reward should pull the mean.
  const auto p = small_policy(6);
  const std::vector<double> x{0.2, 0.4, 0.6, 0.8};
  const auto mu = p.mean(x);
  const std::vector<double> good{mu[0] + 0.1, mu[1]};
  const std::vector<double> bad{mu[0] - 0.1, mu[1]};
  std::vector<RewardRecord> batch{{ParamVector(good), 1.0, -1.0, p.log_density_grad(x, good)},
                                  {ParamVector(bad), 5.0, -5.0, p.log_density_grad(x, bad)}};
  const auto q = pg_update(p, batch, 1e-3);
  EXPECT_GT(q.mean(x)[0], mu[0]);
}

TEST(PolicyGradient, NormalizationDividesByRewardSpread) {
  const auto p = small_policy();
  const auto a = batch_with_rewards(p, {-1.0, -3.0});
  const auto b = batch_with_rewards(p, {-10.0, -30.0});
  const auto ga = policy_gradient(a, true);
  const auto gb = policy_gradient(b, true);
  for (std::size_t i = 0; i < ga.size(); ++i) EXPECT_NEAR(ga[i], gb[i], 1e-12 * (1.0 + std::abs(ga[i])));
}

TEST(Adam, FirstStepHasMagnitudeAlpha) {
  auto p = small_policy();
  AdamAscent adam(p.parameter_count());
  std::vector<double> g(p.parameter_count(), 0.0);
  g[0] = 3.0;
  g[1] = -0.5;
  const double before0 = p.parameters()[0];
  const double before1 = p.parameters()[1];
  p = adam.step(std::move(p), g, 0.01);
  EXPECT_NEAR(p.parameters()[0] - before0, 0.01, 1e-9);
  EXPECT_NEAR(p.parameters()[1] - before1, -0.01, 1e-9);
}

GaPopulation evaluated(const GaSettings& ga, std::uint64_t seed) {
  GaPopulation pop = ga_initial_population(ga, 2, SeedStream(seed, 0));
  evaluate(pop, [](const ParamVector& t) { return -(std::abs(t[0] - 0.2) + std::abs(t[1] - 0.7)); });
  return pop;
}

TEST(Ga, InitialPopulationInRange) {
  const GaSettings ga;
  const GaPopulation pop = ga_initial_population(ga, 2, SeedStream(1, 0));
  ASSERT_EQ(pop.members.size(), 30u);
  for (const auto& m : pop.members) {
    for (double v : m) {
      EXPECT_GT(v, 0.0);
      EXPECT_LE(v, 1.5);
    }
  }
}

TEST(Ga, SelectionKeepsFifteenSurvivorsUnchanged) {
  const GaSettings ga;
  const GaPopulation pop = evaluated(ga, 2);
  const GaPopulation next = ga_generation(pop, ga, SeedStream(3, 0));
  ASSERT_EQ(next.members.size(), 30u);
  const auto order = ranked(pop);
  for (std::size_t i = 0; i < 15; ++i) EXPECT_EQ(next.members[i], pop.members[order[i]]);
}

TEST(Ga, DegenerateRatesCloneSurvivors) {
  GaSettings ga;
  ga.mutation_rate = 0.0;
  ga.crossover_rate = 0.0;
  const GaPopulation pop = evaluated(ga, 4);
  const GaPopulation next = ga_generation(pop, ga, SeedStream(5, 0));
  const auto order = ranked(pop);
  std::set<std::vector<double>> survivors;
  for (std::size_t i = 0; i < 15; ++i) survivors.insert(pop.members[order[i]].values());
  for (const auto& m : next.members) EXPECT_TRUE(survivors.count(m.values()));
}

TEST(Ga, RejectsWrongSizeOrUnevaluated) {
  const GaSettings ga;
  GaPopulation pop = ga_initial_population(ga, 2, SeedStream(1, 0));
  EXPECT_THROW((void)ga_generation(pop, ga, SeedStream(1, 1)), InvalidArgument);
  pop = evaluated(ga, 1);
  pop.members.pop_back();
  pop.fitness.pop_back();
  EXPECT_THROW((void)ga_generation(pop, ga, SeedStream(1, 1)), InvalidArgument);
}

TEST(Ga, BestFitnessNeverDecreases) {
  const GaSettings ga;
  GaPopulation pop = evaluated(ga, 9);
  auto fitness = [](const ParamVector& t) { return -(std::abs(t[0] - 0.2) + std::abs(t[1] - 0.7)); };
  double best = pop.fitness[ranked(pop).front()];
  for (std::uint64_t g = 0; g < 50; ++g) {
    pop = ga_generation(pop, ga, SeedStream(10, g));
    evaluate(pop, fitness);
    const double now = pop.fitness[ranked(pop).front()];
    EXPECT_GE(now, best);
    best = now;
  }
}

ExperimentConfig tiny(Method m) {
  ExperimentConfig c;
  c.method = m;
  c.iterations = 4;
  c.horizon = 20;
  c.batch_size = 4;
  return c;
}

TEST(RunMethod, RecordShapes) {
  for (Method m : kAllMethods) {
    const auto records = run_method(tiny(m));
    ASSERT_EQ(records.size(), 4u) << to_string(m);
    for (std::size_t i = 0; i < records.size(); ++i) {
      EXPECT_EQ(records[i].iteration, i + 1);
      EXPECT_EQ(records[i].method, to_string(m));
      EXPECT_EQ(records[i].param_mse, param_mse(records[i].prediction, ParamVector{0.2, 0.7}));
      EXPECT_EQ(records[i].wall_ms, 0.0);
    }
  }
}

TEST(RunMethod, ZeroIterationsGiveEmptyLog) {
  ExperimentConfig c = tiny(Method::kPgfp);
  c.iterations = 0;
  EXPECT_TRUE(run_method(c).empty());
  c.method = Method::kGa;
  EXPECT_TRUE(run_method(c).empty());
}

TEST(RunMethod, BitReproducible) {
  for (Method m : kAllMethods) {
    const auto a = run_method(tiny(m));
    const auto b = run_method(tiny(m));
    for (std::size_t i = 0; i < a.size(); ++i) {
      EXPECT_EQ(a[i].prediction, b[i].prediction);
      EXPECT_EQ(a[i].mean_mste, b[i].mean_mste);
    }
  }
}

TEST(RunMethod, GaFirstPredictionIsBestOfInitialPopulation) {
  ExperimentConfig c = tiny(Method::kGa);
  c.iterations = 1;
  const auto records = run_method(c);
  const GaPopulation init = ga_initial_population(c.ga, 2, role_stream(SeedStream(c.seed, 0), StreamRole::kGaInit));
  bool found = false;
  for (const auto& m : init.members) found = found || m == records[0].prediction;
  EXPECT_TRUE(found);
}

TEST(RunMethod, BudgetExhaustionSurfaces) {
  ExperimentConfig c = tiny(Method::kPgfp);
  c.physical_budget = 30;  // less than two 20-step episodes
  EXPECT_THROW((void)run_method(c), BudgetExhausted);
  c.method = Method::kGafp;
  EXPECT_THROW((void)run_method(c), BudgetExhausted);
}

TEST(RunMethod, RejectsMismatchedRunner) {
  const ExperimentConfig c = tiny(Method::kGa);
  PhysicalHandle phys(c.environment);
  TowerDefenseEnv dig(without_parameters(c.environment));
  EXPECT_THROW((void)run_pg(c, phys, dig, TowerStrategy{}), InvalidArgument);
}

}  // namespace
}  // namespace dtwin
