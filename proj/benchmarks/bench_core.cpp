#include <benchmark/benchmark.h>

#include "experiment/config.hpp"
#include "mecgame/best_response.hpp"
#include "mecgame/game.hpp"
#include "mecgame/poa.hpp"

namespace {

using namespace mecgame;
namespace ex = mecgame::experiment;

Network network(std::size_t users, std::uint64_t seed = 42) {
  ex::ExperimentConfig c = ex::preset_config();
  c.generator.num_users = users;
  return ex::build_network(c.generator, seed);
}

void BM_Potential(benchmark::State& state) {
  const Network net = network(state.range(0));
  const StrategyProfile p = initial_profile(net);
  for (auto _ : state) benchmark::DoNotOptimize(potential(net, p));
}
BENCHMARK(BM_Potential)->Arg(20)->Arg(50);

void BM_TransmitPower(benchmark::State& state) {
  const Network net = network(50);
  const StrategyProfile p = initial_profile(net);
  std::size_t n = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(best_transmit_power(net, p, n, {}));
    n = (n + 1) % net.num_users();
  }
}
BENCHMARK(BM_TransmitPower);

void BM_BestResponse(benchmark::State& state) {
  const Network net = network(50);
  const StrategyProfile p = initial_profile(net);
  std::size_t n = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(best_response(net, p, n));
    n = (n + 1) % net.num_users();
  }
}
BENCHMARK(BM_BestResponse);

void BM_Dynamics(benchmark::State& state) {
  const Network net = network(state.range(0));
  for (auto _ : state) {
    const GameTrace t = run_dynamics(net, EngineConfig{});
    benchmark::DoNotOptimize(t.rounds_to_converge);
  }
}
BENCHMARK(BM_Dynamics)->Arg(20)->Arg(30)->Arg(40)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_Enumeration(benchmark::State& state) {
  const Network net = network(state.range(0));
  const StrategyProfile ne = run_dynamics(net, EngineConfig{}).final_profile();
  for (auto _ : state) {
    benchmark::DoNotOptimize(centralized_optimum(net, {16, 6}, ne).potential);
  }
  state.counters["profiles"] =
      static_cast<double>(centralized_optimum(net, {16, 6}, ne).evaluated);
}
BENCHMARK(BM_Enumeration)->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
