// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "firesafe/report.hpp"
#include "firesafe/sim.hpp"
#include "test_util.hpp"

using namespace firesafe;

namespace {

std::vector<incident_record> load_fixture(const std::string& name) {
  return parse_incident_csv(fstest::read_file(fstest::data_path("fixtures/" + name)));
}

// Independent oracle: a bare fold, written before the aggregation code.
std::int64_t fold_total(const std::vector<incident_record>& rs) {
  std::int64_t sum = 0;
  for (const auto& r : rs) sum += r.count;
  return sum;
}

}  // namespace

TEST_CASE("regions fixture reproduces the printed extremes") {
  const auto records = load_fixture("ghana_2018_regions.csv");
  REQUIRE(records.size() == 10);
  const auto summary = aggregate(records);
  REQUIRE(summary.max.has_value());
  CHECK(summary.max->category == "Ashanti Region");
  CHECK(summary.max->count == 542);
  REQUIRE(summary.min.has_value());
  CHECK(summary.min->category == "Upper West Region");
  CHECK(summary.min->count == 64);
  CHECK(summary.total == 2728);
  CHECK(summary.total == fold_total(records));
}

TEST_CASE("sectors fixture reproduces the printed extremes") {
  const auto records = load_fixture("ghana_2018_sectors.csv");
  REQUIRE(records.size() == 7);
  const auto summary = aggregate(records);
  CHECK(summary.max->category == "Domestic");
  CHECK(summary.max->count == 1794);
  CHECK(summary.min->category == "Industrial");
  CHECK(summary.min->count == 110);
  CHECK(summary.total == 4280);
  CHECK(summary.total == fold_total(records));
  CHECK(summary.ranked[1].category == "Bush fires");  // 859 is second
}

TEST_CASE("empty input yields an empty summary") {
  const auto summary = aggregate(std::vector<incident_record>{});
  CHECK(summary.total == 0);
  CHECK_FALSE(summary.max.has_value());
  CHECK_FALSE(summary.min.has_value());
  CHECK(summary.ranked.empty());
}

TEST_CASE("duplicate categories are rejected") {
  const std::vector<incident_record> rs = {{"A", 1}, {"B", 2}, {"A", 3}};
  CHECK_THROWS_AS(aggregate(rs), duplicate_category);
}

TEST_CASE("ranking is a sorted permutation with alphabetical ties") {
  std::mt19937 rng(31);
  std::uniform_int_distribution<std::int64_t> count(0, 50);
  for (int round = 0; round < 200; ++round) {
    std::vector<incident_record> rs;
    const int n = 1 + round % 12;
    for (int i = 0; i < n; ++i)
      rs.push_back({"cat" + std::to_string(i), count(rng)});
    const auto summary = aggregate(rs);

    REQUIRE(summary.ranked.size() == rs.size());
    auto sorted_in = rs;
    auto sorted_out = summary.ranked;
    auto by_cat = [](const incident_record& a, const incident_record& b) {
      return a.category < b.category;
    };
    std::sort(sorted_in.begin(), sorted_in.end(), by_cat);
    std::sort(sorted_out.begin(), sorted_out.end(), by_cat);
    CHECK(sorted_in == sorted_out);  // permutation

    for (std::size_t i = 1; i < summary.ranked.size(); ++i) {
      const auto& prev = summary.ranked[i - 1];
      const auto& cur = summary.ranked[i];
      CHECK((prev.count > cur.count ||
             (prev.count == cur.count && prev.category < cur.category)));
    }
    CHECK(summary.max->count == summary.ranked.front().count);
    CHECK(summary.min->count == summary.ranked.back().count);
    CHECK(summary.total == fold_total(rs));
  }
}

TEST_CASE("CSV parser errors carry line numbers") {
  try {
    parse_incident_csv("category,count\nA,1\nB,x\n");
    FAIL("expected csv_error");
  } catch (const csv_error& e) {
    CHECK(e.line() == 3);
  }
  try {
    parse_incident_csv("nope\nA,1\n");
    FAIL("expected csv_error");
  } catch (const csv_error& e) {
    CHECK(e.line() == 1);
  }
  CHECK_THROWS_AS(parse_incident_csv(""), csv_error);
  CHECK_THROWS_AS(parse_incident_csv("category,count\r\nA,1\n"), csv_error);
  CHECK_THROWS_AS(parse_incident_csv("category,count\n,5\n"), csv_error);
  CHECK_THROWS_AS(parse_incident_csv("category,count\nA,-2\n"), csv_error);
}

TEST_CASE("categories may contain commas; the count is after the last one") {
  const auto rs = parse_incident_csv("category,count\nTakoradi, Western,7\n");
  REQUIRE(rs.size() == 1);
  CHECK(rs[0].category == "Takoradi, Western");
  CHECK(rs[0].count == 7);
}

TEST_CASE("summaries of simulated transcripts") {
  scenario s;
  s.name = "reset";
  s.horizon = 30000;
  s.events = {{0, scenario_event::kind::set_smoke, 0.9, {}, 1},
              {5000, scenario_event::kind::press_reset, 0, {}, 1}};
  const auto t = run_scenario(fstest::config_without_debounce(), s);
  const auto sum = summarize_transcript(t);
  CHECK(sum.calls_placed == 0);
  CHECK(sum.sms_sent == 1);
  CHECK(sum.detections == 1);
  CHECK(sum.time_to_cutoff == 0);

  const auto empty = summarize_transcript(std::vector<transcript_record>{});
  CHECK(empty.detections == 0);
  CHECK(empty.sms_sent == 0);
  CHECK(empty.calls_placed == 0);
  CHECK(empty.failures == 0);
  CHECK_FALSE(empty.time_to_cutoff.has_value());
  CHECK_FALSE(empty.time_to_first_sms.has_value());
}

TEST_CASE("summary counters are bounded by the transcript length") {
  const auto text = fstest::read_file(fstest::data_path("scenarios/flagship.json"));
  const auto t = run_scenario(fstest::default_config(), parse_scenario(text));
  const auto sum = summarize_transcript(t);
  const auto n = static_cast<std::int64_t>(t.size());
  CHECK(sum.detections >= 0);
  CHECK(sum.detections <= n);
  CHECK(sum.sms_sent + sum.calls_placed + sum.failures <= n);
}

TEST_CASE("transcript JSONL round-trips and flags bad lines") {
  const auto t = run_scenario(fstest::default_config(),
                              parse_scenario(fstest::read_file(
                                  fstest::data_path("scenarios/flagship.json"))));
  const std::string jsonl = transcript_to_jsonl(t);
  const auto parsed = parse_transcript(jsonl);
  CHECK(parsed == t);
  CHECK(transcript_to_jsonl(parsed) == jsonl);

  try {
    parse_transcript("{\"kind\":\"ACTION\",\"payload\":{},\"seq\":0,\"t\":0}\nwat\n");
    FAIL("expected malformed_transcript");
  } catch (const malformed_transcript& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(
      parse_transcript("{\"kind\":\"NOPE\",\"payload\":{},\"seq\":0,\"t\":0}\n"),
      malformed_transcript);
  CHECK_THROWS_AS(
      parse_transcript("{\"kind\":\"ACTION\",\"payload\":{\"x\":1.5},\"seq\":0,\"t\":0}\n"),
      malformed_transcript);
}
