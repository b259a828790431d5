#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "fixtures.hpp"
#include "mecgame/scenario.hpp"

namespace mecgame {
namespace {

using testing::make_scenario;

TEST(Generator, PresetIsValid) {
  const GeneratorConfig g;
  const Scenario s = generate_scenario(g, 42);
  EXPECT_NO_THROW(s.validate());
  ASSERT_EQ(s.num_users(), 20u);
  ASSERT_EQ(s.num_cells(), 5u);
  EXPECT_DOUBLE_EQ(s.channel_bandwidth_hz, 5e6);
  EXPECT_DOUBLE_EQ(s.noise_power_w, 1e-13);
  EXPECT_DOUBLE_EQ(s.path_loss_exponent, 4.0);
  EXPECT_DOUBLE_EQ(s.cloud_frequency_hz, 1e10);
  for (std::size_t n = 0; n < s.num_users(); ++n) {
    EXPECT_DOUBLE_EQ(s.profiles[n].p_max_w, 0.15);
    EXPECT_DOUBLE_EQ(s.profiles[n].kappa, 1e-27);
    EXPECT_DOUBLE_EQ(s.profiles[n].f_max_hz, 1e9);
    EXPECT_NEAR(s.tasks[n].workload_cycles(), 1e9, 1e-3);
    const double d = distance(s.user_positions[n], s.bs_positions[s.cell_of[n]]);
    EXPECT_LE(d, g.cell_radius_m);
    EXPECT_GE(d, g.min_user_distance_m);
  }
}

TEST(Generator, SameSeedSameScenario) {
  const GeneratorConfig g;
  EXPECT_EQ(generate_scenario(g, 7), generate_scenario(g, 7));
  EXPECT_NE(generate_scenario(g, 7), generate_scenario(g, 8));
}

TEST(Generator, SingleUserHasNoInterferers) {
  GeneratorConfig g;
  g.num_bs = 1;
  g.num_users = 1;
  const Scenario s = generate_scenario(g, 1);
  const InterferenceGraph graph = build_interference_graph(s, assign_channels(s, 1));
  EXPECT_TRUE(graph.in_neighbors[0].empty());
  EXPECT_TRUE(graph.out_neighbors[0].empty());
}

TEST(Generator, RejectsBadConfig) {
  GeneratorConfig g;
  g.num_users = 0;
  EXPECT_THROW(generate_scenario(g, 1), ValidationError);
  g = GeneratorConfig{};
  g.cell_radius_m = 0.0;
  EXPECT_THROW(generate_scenario(g, 1), ValidationError);
  g = GeneratorConfig{};
  g.cell_radius_m = -3.0;
  EXPECT_THROW(generate_scenario(g, 1), ValidationError);
}

TEST(ChannelGain, UnitAndFiftyMetres) {
  const Scenario s =
      make_scenario({{0, 0}}, {{1, 0}, {50, 0}, {0, 10}}, {0, 0, 0}, 3);
  EXPECT_DOUBLE_EQ(channel_gain(0, 0, s), 1.0);
  EXPECT_NEAR(channel_gain(1, 0, s), 1.6e-7, 1e-20);
  EXPECT_NEAR(channel_gain(2, 0, s), 1e-4, 1e-17);
}

TEST(ChannelGain, StrictlyDecreasingInDistance) {
  const Scenario s = make_scenario({{0, 0}}, {{1, 0}, {2, 0}, {30, 0}, {31, 0}},
                                   {0, 0, 0, 0}, 4);
  for (std::size_t n = 1; n < 4; ++n) {
    EXPECT_GT(channel_gain(n - 1, 0, s), channel_gain(n, 0, s));
  }
}

TEST(ChannelGain, CoincidentPositionRejected) {
  const Scenario s = make_scenario({{0, 0}}, {{0, 0}}, {0}, 1);
  EXPECT_THROW(channel_gain(0, 0, s), ValidationError);
}

TEST(Channels, SingleCellUsesDistinctChannels) {
  const Scenario s =
      make_scenario({{0, 0}}, {{1, 0}, {2, 0}, {3, 0}}, {0, 0, 0}, 3);
  const ChannelPlan plan = assign_channels(s, 5);
  std::set<std::size_t> used(plan.channel_of.begin(), plan.channel_of.end());
  EXPECT_EQ(used, (std::set<std::size_t>{0, 1, 2}));
}

TEST(Channels, TwoCellsReuseTheBand) {
  const Scenario s = make_scenario({{0, 0}, {100, 0}},
                                   {{10, 0}, {110, 0}, {0, 10}, {100, 10}},
                                   {0, 1, 0, 1}, 2);
  const ChannelPlan plan = assign_channels_in_order(s);
  EXPECT_EQ(plan.channel_of, (std::vector<std::size_t>{0, 0, 1, 1}));
  const InterferenceGraph g = build_interference_graph(s, plan);
  EXPECT_EQ(g.in_neighbors[0], (std::vector<std::size_t>{1}));
  EXPECT_EQ(g.in_neighbors[2], (std::vector<std::size_t>{3}));
}

TEST(Channels, OverfullCellIsACapacityError) {
  const Scenario s =
      make_scenario({{0, 0}}, {{1, 0}, {2, 0}, {3, 0}}, {0, 0, 0}, 2);
  EXPECT_THROW(assign_channels(s, 1), CapacityError);
  EXPECT_THROW(assign_channels_in_order(s), CapacityError);
}

TEST(Channels, OrthogonalWithinEveryCell) {
  GeneratorConfig g;
  g.num_users = 50;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Scenario s = generate_scenario(g, seed);
    EXPECT_NO_THROW(validate_plan(s, assign_channels(s, seed)));
    EXPECT_NO_THROW(validate_plan(s, assign_channels_in_order(s)));
  }
}

TEST(InterferenceGraph, RangeAsymmetry) {
  Scenario s = make_scenario({{0, 0}, {100, 0}}, {{40, 0}, {70, 0}}, {0, 1}, 1);
  s.profiles[0].tx_range_m = 100.0;  // i
  s.profiles[1].tx_range_m = 20.0;   // n
  const InterferenceGraph g = build_interference_graph(s, assign_channels_in_order(s));
  EXPECT_EQ(g.in_neighbors[1], (std::vector<std::size_t>{0}));
  EXPECT_TRUE(g.in_neighbors[0].empty());
  EXPECT_EQ(g.out_neighbors[0], (std::vector<std::size_t>{1}));
  EXPECT_TRUE(g.out_neighbors[1].empty());
}

TEST(InterferenceGraph, DifferentChannelsDoNotInteract) {
  const Scenario s = make_scenario({{0, 0}, {100, 0}},
                                   {{10, 0}, {0, 10}, {110, 0}}, {0, 0, 1}, 2);
  ChannelPlan plan{{0, 1, 1}};
  const InterferenceGraph g = build_interference_graph(s, plan);
  EXPECT_TRUE(g.in_neighbors[0].empty());
  EXPECT_TRUE(g.out_neighbors[0].empty());
  EXPECT_EQ(g.in_neighbors[1], (std::vector<std::size_t>{2}));
}

TEST(InterferenceGraph, SameCellNeverInteracts) {
  const Scenario s = make_scenario({{0, 0}}, {{10, 0}, {0, 10}}, {0, 0}, 2);
  const InterferenceGraph g = build_interference_graph(s, ChannelPlan{{0, 1}});
  EXPECT_TRUE(g.in_neighbors[0].empty());
  EXPECT_TRUE(g.in_neighbors[1].empty());
}

TEST(InterferenceGraph, Duality) {
  GeneratorConfig g;
  g.num_users = 40;
  g.user.tx_range_m = 120.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Scenario s = generate_scenario(g, seed);
    const InterferenceGraph graph =
        build_interference_graph(s, assign_channels(s, seed));
    for (std::size_t n = 0; n < s.num_users(); ++n) {
      for (std::size_t i : graph.in_neighbors[n]) {
        const auto& out = graph.out_neighbors[i];
        EXPECT_NE(std::find(out.begin(), out.end(), n), out.end());
      }
      for (std::size_t i : graph.out_neighbors[n]) {
        const auto& in = graph.in_neighbors[i];
        EXPECT_NE(std::find(in.begin(), in.end(), n), in.end());
      }
    }
  }
}

}  // namespace
}  // namespace mecgame
