#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "dtwin/policy.hpp"
#include "support.hpp"

namespace dtwin {
namespace {

using Pairs = std::vector<std::pair<std::size_t, std::size_t>>;

TEST(Hungarian, ZeroDiagonal) {
  const Assignment a = hungarian(CostMatrix{{0, 1}, {1, 0}});
  EXPECT_EQ(a.pairs, (Pairs{{0, 0}, {1, 1}}));
  EXPECT_EQ(a.total, 0.0);
}

TEST(Hungarian, AntiDiagonal) {
  const Assignment a = hungarian(CostMatrix{{4, 1}, {2, 3}});
  EXPECT_EQ(a.pairs, (Pairs{{0, 1}, {1, 0}}));
  EXPECT_EQ(a.total, 3.0);
}

TEST(Hungarian, WideMatrix) {
  const Assignment a = hungarian(CostMatrix{{1, 2, 9}, {2, 1, 9}});
  EXPECT_EQ(a.pairs, (Pairs{{0, 0}, {1, 1}}));
  EXPECT_EQ(a.total, 2.0);
  EXPECT_TRUE(a.unassigned.empty());
}

TEST(Hungarian, TallMatrixLeavesRowsUnassigned) {
  const Assignment a = hungarian(CostMatrix{{5}, {1}, {3}});
  EXPECT_EQ(a.pairs, (Pairs{{1, 0}}));
  EXPECT_EQ(a.unassigned, (std::vector<std::size_t>{0, 2}));
  EXPECT_EQ(a.total, 1.0);
}

TEST(Hungarian, TiesPickLexicographicallySmallest) {
  const Assignment all_equal = hungarian(CostMatrix{{1, 1, 1}, {1, 1, 1}});
  EXPECT_EQ(all_equal.pairs, (Pairs{{0, 0}, {1, 1}}));
  // Both matchings cost 2; (0,0),(1,1) wins over (0,1),(1,0).
  const Assignment swap = hungarian(CostMatrix{{1, 1}, {1, 1}});
  EXPECT_EQ(swap.pairs, (Pairs{{0, 0}, {1, 1}}));
}

TEST(Hungarian, EmptyInputs) {
  EXPECT_TRUE(hungarian(CostMatrix{}).pairs.empty());
  const Assignment no_cols = hungarian(CostMatrix(2, 0));
  EXPECT_TRUE(no_cols.pairs.empty());
  EXPECT_EQ(no_cols.unassigned, (std::vector<std::size_t>{0, 1}));
}

TEST(Hungarian, RejectsNonFinite) {
  EXPECT_THROW((void)hungarian(CostMatrix{{0, std::nan("")}}), InvalidArgument);
  EXPECT_THROW((void)hungarian(CostMatrix{{INFINITY}}), InvalidArgument);
}

TEST(Hungarian, MatchesBruteForceOnSmallRandomMatrices) {
  StreamCursor rng(SeedStream(77, 0));
  for (int i = 0; i < 300; ++i) {
    const std::size_t r = 1 + rng.index(4);
    const std::size_t c = 1 + rng.index(4);
    const CostMatrix m = testing::random_matrix(rng, r, c, i % 2 == 0);
    const Assignment a = hungarian(m);
    EXPECT_EQ(a.total, testing::brute_force_min_cost(m)) << r << "x" << c << " case " << i;
    EXPECT_EQ(a.pairs.size(), std::min(r, c));
  }
}

TEST(AimAngles, AxisExamples) {
  EXPECT_EQ(aim_angles({0, 0, 0}, {1, 0, 0}), (TurretAngles{0.0, 0.0}));
  const TurretAngles y = aim_angles({0, 0, 0}, {0, 1, 0});
  EXPECT_DOUBLE_EQ(y.azimuth, std::numbers::pi / 2);
  EXPECT_EQ(y.pitch, 0.0);
  const TurretAngles up = aim_angles({0, 0, 0}, {1, 0, 1});
  EXPECT_EQ(up.azimuth, 0.0);
  EXPECT_DOUBLE_EQ(up.pitch, std::numbers::pi / 4);
}

TEST(AimAngles, BehindMapsToMinusPi) {
  EXPECT_EQ(aim_angles({0, 0, 0}, {-1, 0, 0}).azimuth, -std::numbers::pi);
}

TEST(AimAngles, CoincidentPositionsRejected) {
  EXPECT_THROW((void)aim_angles({1, 2, 3}, {1, 2, 3}), InvalidArgument);
}

TowerDefenseConfig layout(std::vector<Vec3> turrets, std::size_t bosses) {
  TowerDefenseConfig c;
  c.turrets = turrets.size();
  c.turret_positions = std::move(turrets);
  c.bosses = bosses;
  return c;
}

TEST(StrategyAct, NoLiveBossesHolds) {
  const TowerDefenseConfig c = layout({{0, 0, 0}, {10, 0, 0}}, 1);
  const Observation obs{StateVector{0.3, 0.1, -0.2, 0.4, 50, 50, 50}, {false}};
  EXPECT_EQ(strategy_act(obs, c), (ActionVector{0.3, 0.1, -0.2, 0.4}));
}

TEST(StrategyAct, SingleTurretSingleBoss) {
  const TowerDefenseConfig c = layout({{0, 0, 0}}, 1);
  const Observation obs{StateVector{0.0, 0.0, 0.0, 5.0, 0.0}, {true}};
  const ActionVector a = strategy_act(obs, c);
  EXPECT_DOUBLE_EQ(a[0], std::numbers::pi / 2);
  EXPECT_EQ(a[1], 0.0);
}

TEST(StrategyAct, CrossedConfigurationUsesNearestPairing) {
  // Boss 0 sits next to turret 1 and boss 1 next to turret 0.
  const TowerDefenseConfig c = layout({{0, 0, 0}, {100, 0, 0}}, 2);
  const Observation obs{StateVector{0, 0, 0, 0, 90, 10, 0, 10, 10, 0}, {true, true}};
  const ActionVector a = strategy_act(obs, c);
  const TurretAngles t0 = aim_angles({0, 0, 0}, {10, 10, 0});
  const TurretAngles t1 = aim_angles({100, 0, 0}, {90, 10, 0});
  EXPECT_EQ(a, (ActionVector{t0.azimuth, t0.pitch, t1.azimuth, t1.pitch}));
}

TEST(StrategyAct, SurplusTurretHolds) {
  const TowerDefenseConfig c = layout({{0, 0, 0}, {100, 0, 0}}, 1);
  const Observation obs{StateVector{0.5, 0.5, 0.25, 0.25, 10, 0, 0}, {true}};
  const ActionVector a = strategy_act(obs, c);
  EXPECT_EQ(a[0], 0.0);
  EXPECT_EQ(a[1], 0.0);
  EXPECT_EQ(a[2], 0.25);
  EXPECT_EQ(a[3], 0.25);
}

TEST(StrategyAct, DeadBossesAreIgnored) {
  const TowerDefenseConfig c = layout({{0, 0, 0}}, 2);
  const Observation obs{StateVector{0, 0, 1, 0, 0, 0, 50, 0}, {false, true}};
  const ActionVector a = strategy_act(obs, c);
  EXPECT_DOUBLE_EQ(a[0], std::numbers::pi / 2);
}

}  // namespace
}  // namespace dtwin
