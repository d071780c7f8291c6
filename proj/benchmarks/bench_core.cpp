#include <benchmark/benchmark.h>

#include "blindcast/channel.hpp"
#include "blindcast/network.hpp"

using namespace blindcast;

namespace {

const ScheduleSeed kSeed{default_master_key(), {}};

void BM_PrfUniform(benchmark::State& state) {
  std::uint64_t j = 0;
  for (auto _ : state) benchmark::DoNotOptimize(prf_uniform(kSeed.key, StreamTag::sync, 12345, j++));
}
BENCHMARK(BM_PrfUniform);

void BM_StreamKey(benchmark::State& state) {
  NodeId v = 1;
  for (auto _ : state) benchmark::DoNotOptimize(stream_key(kSeed.key, StreamTag::sync, v++));
}
BENCHMARK(BM_StreamKey);

void BM_SyncProgram(benchmark::State& state) {
  const SynchronizerSchedule schedule(kSeed);
  const auto program = schedule.bind(777, 0);
  Step j = 0;
  for (auto _ : state) benchmark::DoNotOptimize(program->transmits(j++));
}
BENCHMARK(BM_SyncProgram);

void BM_TransmissionProgram(benchmark::State& state) {
  const TransmissionSchedule schedule(kSeed);
  const auto program = schedule.bind(777, 0);
  Step j = 0;
  for (auto _ : state) benchmark::DoNotOptimize(program->transmits(j++));
}
BENCHMARK(BM_TransmissionProgram);

void BM_SimulateMac(benchmark::State& state) {
  const auto mode = state.range(1) == 0 ? Mode::wakeup : Mode::broadcast;
  const auto inst = random_instance(state.range(0), 1u << 20, {}, 1);
  std::uint64_t i = 0;
  for (auto _ : state) {
    const ScheduleSeed seed{derive_key(kSeed.key, i++), {}};
    benchmark::DoNotOptimize(simulate_mac(inst, seed, mode, 10'000'000).hit_step);
  }
}
BENCHMARK(BM_SimulateMac)->ArgsProduct({{8, 64, 1024}, {0, 1}})->Unit(benchmark::kMicrosecond);

void BM_SimulateNetwork(benchmark::State& state) {
  const auto ids = random_ids(state.range(0) * 4, 1u << 20, 3);
  const auto net = layered_clique_chain(state.range(0), 4, ids);
  std::uint64_t i = 0;
  for (auto _ : state) {
    const ScheduleSeed seed{derive_key(kSeed.key, i++), {}};
    benchmark::DoNotOptimize(simulate_network(net, {{ids[0], 0}}, seed, Mode::broadcast, 100'000'000).completion_step);
  }
}
BENCHMARK(BM_SimulateNetwork)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
