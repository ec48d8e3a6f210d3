// SPDX-License-Identifier: Apache-2.0
#include "firesafe/report.hpp"

#include <algorithm>
#include <charconv>
#include <set>

namespace firesafe {

std::vector<incident_record> parse_incident_csv(std::string_view text) {
  std::vector<incident_record> records;
  bool saw_header = false;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    const bool last = end == std::string_view::npos;
    std::string_view line = text.substr(pos, last ? text.size() - pos : end - pos);
    pos = last ? text.size() + 1 : end + 1;
    ++line_no;
    if (line.ends_with('\r'))
      throw csv_error(line_no, "CRLF line ending; the format is LF only");
    if (line.empty()) {
      if (last) break;
      continue;
    }
    if (!saw_header) {
      if (line != "category,count")
        throw csv_error(line_no, "header must be exactly 'category,count'");
      saw_header = true;
      continue;
    }
    const std::size_t comma = line.rfind(',');
    if (comma == std::string_view::npos)
      throw csv_error(line_no, "expected 'category,count'");
    const std::string_view category = line.substr(0, comma);
    const std::string_view count_text = line.substr(comma + 1);
    if (category.empty()) throw csv_error(line_no, "empty category");
    std::int64_t count = 0;
    const auto* first = count_text.data();
    const auto* past = count_text.data() + count_text.size();
    auto [p, ec] = std::from_chars(first, past, count);
    if (ec != std::errc{} || p != past || count < 0)
      throw csv_error(line_no, "count must be a non-negative integer");
    records.push_back({std::string(category), count});
  }
  if (!saw_header) throw csv_error(1, "missing 'category,count' header");
  return records;
}

incident_summary aggregate(std::span<const incident_record> records) {
  std::set<std::string_view> seen;
  for (const auto& r : records) {
    if (!seen.insert(r.category).second)
      throw duplicate_category("duplicate category '" + r.category + "'");
  }

  incident_summary s;
  s.ranked.assign(records.begin(), records.end());
  std::sort(s.ranked.begin(), s.ranked.end(),
            [](const incident_record& a, const incident_record& b) {
              if (a.count != b.count) return a.count > b.count;
              return a.category < b.category;
            });
  for (const auto& r : s.ranked) s.total += r.count;
  if (!s.ranked.empty()) {
    s.max = s.ranked.front();
    s.min = s.ranked.back();
  }
  return s;
}

transcript_summary summarize_transcript(std::span<const transcript_record> t) {
  transcript_summary s;
  std::optional<std::int64_t> first_high_edge;
  std::optional<std::int64_t> first_power_off;
  std::optional<std::int64_t> first_sms;

  for (const auto& r : t) {
    switch (r.kind) {
      case record_kind::sensor_edge:
        if (r.str_at("output") == "HIGH") {
          ++s.detections;
          if (!first_high_edge) first_high_edge = r.t;
        }
        break;
      case record_kind::sms_delivered:
        ++s.sms_sent;
        if (!first_sms) first_sms = r.t;
        break;
      case record_kind::call_placed:
        ++s.calls_placed;
        break;
      case record_kind::notification_failed:
        ++s.failures;
        break;
      case record_kind::power_change: {
        const payload_value* loads = r.find("loads_powered");
        if (loads && std::holds_alternative<bool>(*loads) &&
            !std::get<bool>(*loads) && !first_power_off)
          first_power_off = r.t;
        break;
      }
      default:
        break;
    }
  }

  if (first_high_edge && first_power_off)
    s.time_to_cutoff = *first_power_off - *first_high_edge;
  if (first_high_edge && first_sms)
    s.time_to_first_sms = *first_sms - *first_high_edge;
  return s;
}

}  // namespace firesafe
