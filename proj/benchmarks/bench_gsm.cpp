// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include "firesafe/at.hpp"
#include "firesafe/modem.hpp"

namespace {

const firesafe::phone_number kOwner{"+233244000001"};

void bm_parse_response_stream(benchmark::State& state) {
  // A realistic reply soup: acks, OKs, a CMS error, a prompt.
  std::string soup;
  for (int i = 0; i < 64; ++i) {
    soup += "\r\nOK\r\n";
    soup += "\r\n+CMGS: " + std::to_string(i % 256) + "\r\n";
    soup += "\r\n+CMS ERROR: 500\r\n";
    soup += "> ";
  }
  for (auto _ : state) {
    std::string_view rest = soup;
    int units = 0;
    while (!rest.empty()) {
      const auto r = firesafe::parse_response(rest);
      if (!r.is_response()) break;
      rest.remove_prefix(r.consumed);
      ++units;
    }
    benchmark::DoNotOptimize(units);
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(soup.size()));
}

void bm_encode_sms(benchmark::State& state) {
  const std::string body(static_cast<std::size_t>(state.range(0)), 'x');
  for (auto _ : state) {
    auto frames = firesafe::encode_sms(kOwner, body);
    benchmark::DoNotOptimize(frames);
  }
}

void bm_modem_sms_exchange(benchmark::State& state) {
  const auto frames = firesafe::encode_sms(kOwner, "FIRE ALERT at the depot");
  for (auto _ : state) {
    firesafe::modem_session session;
    std::string out;
    for (const auto& f : frames)
      for (const auto& r : session.feed(f)) out += r.bytes;
    benchmark::DoNotOptimize(out);
  }
}

}  // namespace

BENCHMARK(bm_parse_response_stream);
BENCHMARK(bm_encode_sms)->Arg(0)->Arg(160);
BENCHMARK(bm_modem_sms_exchange);
