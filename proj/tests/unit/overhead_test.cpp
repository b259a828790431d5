#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "mecgame/overhead.hpp"

namespace mecgame {
namespace {

using testing::edge_pair;
using testing::isolated_user;
using testing::make_scenario;
using testing::weighted_user;

constexpr double kPmax = 0.15;

TEST(Strategy, FeasibilityRules) {
  const UserProfile u;
  EXPECT_FALSE(feasibility_violation({0, 0, 1e9}, u));
  EXPECT_FALSE(feasibility_violation({1, 0.1, 0}, u));
  EXPECT_FALSE(feasibility_violation({0.5, 0.1, 5e8}, u));
  EXPECT_TRUE(feasibility_violation({1, 0, 0}, u));         // offloads silently
  EXPECT_TRUE(feasibility_violation({0, 0.1, 1e9}, u));     // local but transmitting
  EXPECT_TRUE(feasibility_violation({1, 0.2, 0}, u));       // above p_max
  EXPECT_TRUE(feasibility_violation({1, 0.001, 0}, u));     // below p_min
  EXPECT_TRUE(feasibility_violation({0, 0, 2e9}, u));       // above f_max
  EXPECT_TRUE(feasibility_violation({0.5, 0.1, 0}, u));     // local work, no cpu
  EXPECT_TRUE(feasibility_violation({1.5, 0.1, 0}, u));
}

TEST(Interference, NoNeighboursGivesZero) {
  const Network net = isolated_user();
  EXPECT_EQ(interference_power(net, {{1, kPmax, 0}}, 0), 0.0);
}

TEST(Interference, LocalNeighboursDoNotTransmit) {
  const Network net = edge_pair();
  EXPECT_EQ(interference_power(net, {{1, kPmax, 0}, {0, 0, 1e9}}, 0), 0.0);
}

TEST(Interference, SingleTerm) {
  const Network net = edge_pair();
  EXPECT_NEAR(interference_power(net, {{1, kPmax, 0}, {1, kPmax, 0}}, 0), 2.4e-8,
              1e-20);
}

TEST(Rate, InterferenceFree) {
  const Network net = isolated_user();
  const StrategyProfile p{{1, kPmax, 0}};
  EXPECT_NEAR(sinr(net, p, 0), 2.4e5, 1e-6);
  EXPECT_NEAR(transmission_rate(net, p, 0), 8.936e7, 1e4);
}

TEST(Rate, InterferenceCollapse) {
  const Network net = edge_pair();
  const StrategyProfile p{{1, kPmax, 0}, {1, kPmax, 0}};
  EXPECT_NEAR(sinr(net, p, 0), 1.0, 1e-5);
  EXPECT_NEAR(transmission_rate(net, p, 0), 5.0e6, 1e2);
}

TEST(Rate, MoreInterferenceLowersRate) {
  const Network net = edge_pair();
  const StrategyProfile lo{{1, kPmax, 0}, {1, 0.05, 0}};
  const StrategyProfile hi{{1, kPmax, 0}, {1, 0.10, 0}};
  EXPECT_LT(transmission_rate(net, hi, 0), transmission_rate(net, lo, 0));
}

TEST(LocalOverhead, PureLatencyAndPureEnergy) {
  Scenario s = make_scenario({{0, 0}}, {{10, 0}, {0, 10}}, {0, 0}, 2);
  s.profiles[1] = weighted_user(0.0, 1.0);
  EXPECT_DOUBLE_EQ(local_overhead(s, 0, 1e9), 1.0);
  EXPECT_NEAR(local_overhead(s, 1, 1e9), 1.0, 1e-12);
  EXPECT_EQ(local_overhead(s, 0, 1e9, 0.0), 0.0);
  EXPECT_EQ(local_overhead(s, 0, 0.0, 0.0), 0.0);
  EXPECT_THROW(local_overhead(s, 0, 0.0), ValidationError);
}

TEST(CloudOverhead, LatencyOnly) {
  const Network net = isolated_user();
  const StrategyProfile p{{1, kPmax, 0}};
  EXPECT_NEAR(cloud_overhead(net, p, 0), 0.1560, 5e-5);
  const double r = transmission_rate(net, p, 0);
  EXPECT_NEAR(cloud_overhead(net, p, 0), 5e6 / r + 0.1, 1e-12);
}

TEST(CloudOverhead, EnergyOnly) {
  const Network net = isolated_user(weighted_user(0.0, 1.0));
  const StrategyProfile p{{1, kPmax, 0}};
  const double r = transmission_rate(net, p, 0);
  const double expected = kPmax * (5e6 / r) + 1e-27 * 1e9 * 1e10 * 1e10;
  EXPECT_NEAR(cloud_overhead(net, p, 0), expected, 1e-9 * expected);
}

TEST(CloudOverhead, LinearInOffloadRatio) {
  const Network net = isolated_user(weighted_user(0.5, 0.5));
  const double full = cloud_overhead(net, {{1, kPmax, 0}}, 0);
  EXPECT_NEAR(cloud_overhead(net, {{0.25, kPmax, 5e8}}, 0), 0.25 * full,
              1e-12 * full);
  EXPECT_EQ(cloud_overhead(net, {{0, 0, 5e8}}, 0), 0.0);
}

TEST(TotalOverhead, PureBranches) {
  const Network net = edge_pair(weighted_user(0.5, 0.5));
  const StrategyProfile local{{0, 0, 7e8}, {1, kPmax, 0}};
  EXPECT_DOUBLE_EQ(total_overhead(net, local, 0),
                   local_overhead(net.scenario(), 0, 7e8));
  const StrategyProfile off{{1, kPmax, 0}, {1, kPmax, 0}};
  EXPECT_DOUBLE_EQ(total_overhead(net, off, 0), cloud_overhead(net, off, 0));
}

TEST(TotalOverhead, PartialOffloadTermByTerm) {
  const Network net = edge_pair(weighted_user(0.3, 0.7));
  const StrategyProfile p{{0.5, 0.1, 6e8}, {1, 0.12, 0}};
  // Rebuild every term from the raw scenario.
  const double g_own = std::pow(50.0, -4.0);
  const double gamma = 0.12 * std::pow(50.0, -4.0);
  const double r = 5e6 * std::log2(1.0 + 0.1 * g_own / (1e-13 + gamma));
  const double L = 5e6, W = 1e9, fc = 1e10;
  const double cloud = 0.3 * (0.5 * L / r + 0.5 * W / fc) +
                       0.7 * (0.1 * 0.5 * L / r + 0.5 * 1e-27 * W * fc * fc);
  const double local = 0.3 * (0.5 * W / 6e8) + 0.7 * 1e-27 * 0.5 * W * 6e8 * 6e8;
  EXPECT_NEAR(total_overhead(net, p, 0), cloud + local, 1e-12 * (cloud + local));
}

TEST(Utility, EmptyOutSetIsOwnOverhead) {
  const Network net = isolated_user();
  const StrategyProfile p{{1, kPmax, 0}};
  EXPECT_DOUBLE_EQ(altruistic_utility(net, p, 0), total_overhead(net, p, 0));
}

TEST(Utility, AddsLocalNeighbourOverhead) {
  const Network net = edge_pair();
  const StrategyProfile p{{1, kPmax, 0}, {0, 0, 1e9}};
  EXPECT_DOUBLE_EQ(altruistic_utility(net, p, 0),
                   total_overhead(net, p, 0) + 1.0);
}

TEST(Utility, RaisingPowerHurtsTransmittingNeighbour) {
  const Network net = edge_pair();
  const StrategyProfile lo{{1, 0.05, 0}, {1, kPmax, 0}};
  const StrategyProfile hi{{1, 0.10, 0}, {1, kPmax, 0}};
  EXPECT_GT(total_overhead(net, hi, 1), total_overhead(net, lo, 1));
}

TEST(Potential, SingleUserAndAllLocal) {
  const Network one = isolated_user();
  const StrategyProfile p{{1, kPmax, 0}};
  EXPECT_DOUBLE_EQ(potential(one, p), total_overhead(one, p, 0));

  const Network two = edge_pair();
  EXPECT_DOUBLE_EQ(potential(two, {{0, 0, 1e9}, {0, 0, 1e9}}), 2.0);
  EXPECT_DOUBLE_EQ(potential(two, {{0, 0, 1e9}, {0, 0, 5e8}}), 3.0);
}

TEST(Potential, UnilateralDeviationMatchesUtilityChange) {
  const Network net = edge_pair(weighted_user(0.6, 0.4));
  const StrategyProfile before{{1, 0.05, 0}, {1, 0.12, 0}};
  StrategyProfile after = before;
  after[0] = {1, 0.14, 0};
  const double du = altruistic_utility(net, after, 0) - altruistic_utility(net, before, 0);
  const double dphi = potential(net, after) - potential(net, before);
  EXPECT_NEAR(du, dphi, 1e-12);
}

TEST(Validation, RejectsWrongSizeAndInfeasible) {
  const Network net = edge_pair();
  EXPECT_THROW(validate_profile(net, {{1, kPmax, 0}}), ValidationError);
  EXPECT_THROW(validate_profile(net, {{1, 0, 0}, {1, kPmax, 0}}), ValidationError);
  EXPECT_NO_THROW(validate_profile(net, {{1, kPmax, 0}, {0, 0, 1e9}}));
}

}  // namespace
}  // namespace mecgame
