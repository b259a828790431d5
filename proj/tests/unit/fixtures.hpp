#pragma once

#include <cstddef>
#include <vector>

#include "mecgame/overhead.hpp"
#include "mecgame/scenario.hpp"

namespace mecgame::testing {

// 5e6 bits at 200 cycles/bit, i.e. 1e9 cycles.
inline TaskSpec default_task() { return TaskSpec{5e6, 200.0}; }

inline UserProfile latency_user() { return UserProfile{}; }

inline UserProfile weighted_user(double alpha_t, double alpha_e) {
  UserProfile u;
  u.alpha_t = alpha_t;
  u.alpha_e = alpha_e;
  return u;
}

// Hand-placed world. Every user gets the default task and `user`.
inline Scenario make_scenario(std::vector<Point2> bs, std::vector<Point2> users,
                              std::vector<std::size_t> cells,
                              std::size_t channels = 1,
                              const UserProfile& user = latency_user()) {
  Scenario s;
  s.bs_positions = std::move(bs);
  s.user_positions = std::move(users);
  s.cell_of = std::move(cells);
  s.num_channels = channels;
  s.tasks.assign(s.user_positions.size(), default_task());
  s.profiles.assign(s.user_positions.size(), user);
  return s;
}

// Two cells 100 m apart on one channel. User 0 sits 50 m west of BS 0, user 1
// sits midway, 50 m from both stations, so user 1 hits BS 0 with gain 1.6e-7.
inline Network edge_pair(const UserProfile& user = latency_user()) {
  Scenario s = make_scenario({{0, 0}, {100, 0}}, {{-50, 0}, {50, 0}}, {0, 1}, 1,
                             user);
  return Network(s, assign_channels_in_order(s));
}

inline Network isolated_user(const UserProfile& user = latency_user()) {
  Scenario s = make_scenario({{0, 0}}, {{50, 0}}, {0}, 1, user);
  return Network(s, assign_channels_in_order(s));
}

inline GeneratorConfig small_world(std::size_t users, std::size_t bs = 5) {
  GeneratorConfig g;
  g.num_bs = bs;
  g.num_users = users;
  return g;
}

inline Network generated(const GeneratorConfig& g, std::uint64_t seed) {
  Scenario s = generate_scenario(g, seed);
  ChannelPlan plan = assign_channels_in_order(s);
  return Network(std::move(s), std::move(plan));
}

}  // namespace mecgame::testing
