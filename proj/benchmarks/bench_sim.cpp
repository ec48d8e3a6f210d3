// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include "firesafe/sim.hpp"

namespace {

firesafe::config bench_config() {
  firesafe::config cfg;
  cfg.site_name = "Bench Site";
  cfg.location = "Bench Road 1";
  cfg.owner = firesafe::validate_phone("+233244000001");
  cfg.fire_service = firesafe::validate_phone("+233302000001");
  return cfg;
}

void bm_run_flagship(benchmark::State& state) {
  const firesafe::config cfg = bench_config();
  firesafe::scenario s;
  s.name = "flagship";
  s.horizon = 30000;
  s.events = {{0, firesafe::scenario_event::kind::set_smoke, 0.9, {}, 1}};

  for (auto _ : state) {
    auto t = firesafe::run_scenario(cfg, s);
    benchmark::DoNotOptimize(t);
  }
}

void bm_controller_step(benchmark::State& state) {
  const firesafe::config cfg = bench_config();
  const firesafe::controller_state normal;
  const auto ev = firesafe::input_event::smoke_high(0);
  for (auto _ : state) {
    auto r = firesafe::step(normal, ev, cfg);
    benchmark::DoNotOptimize(r);
  }
}

void bm_sensor_sweep(benchmark::State& state) {
  const firesafe::config cfg = bench_config();
  for (auto _ : state) {
    auto level = firesafe::sensor_level::low;
    for (int i = 0; i < 1000; ++i)
      level = firesafe::sensor_update(level, (i % 100) / 99.0, cfg);
    benchmark::DoNotOptimize(level);
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * 1000);
}

void bm_transcript_serialize(benchmark::State& state) {
  const firesafe::config cfg = bench_config();
  firesafe::scenario s;
  s.name = "flagship";
  s.horizon = 30000;
  s.events = {{0, firesafe::scenario_event::kind::set_smoke, 0.9, {}, 1}};
  const auto t = firesafe::run_scenario(cfg, s);
  for (auto _ : state) {
    auto text = firesafe::transcript_to_jsonl(t);
    benchmark::DoNotOptimize(text);
  }
}

}  // namespace

BENCHMARK(bm_run_flagship);
BENCHMARK(bm_controller_step);
BENCHMARK(bm_sensor_sweep);
BENCHMARK(bm_transcript_serialize);

BENCHMARK_MAIN();
