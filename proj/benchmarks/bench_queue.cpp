// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include <random>

#include "firesafe/sim.hpp"

namespace {

void bm_queue_schedule_drain(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937 rng(1);
  std::uniform_int_distribution<std::int64_t> at(0, 1 << 20);
  std::vector<std::int64_t> times(n);
  for (auto& t : times) t = at(rng);

  for (auto _ : state) {
    firesafe::virtual_clock clock;
    firesafe::event_queue<int> q(clock);
    for (std::size_t i = 0; i < n; ++i) q.schedule(times[i], static_cast<int>(i));
    std::int64_t sink = 0;
    while (!q.empty()) sink += q.pop().at;
    benchmark::DoNotOptimize(sink);
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(n));
}

}  // namespace

BENCHMARK(bm_queue_schedule_drain)->Arg(1 << 10)->Arg(1 << 14)->Arg(1 << 18);
