// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "firesafe/errors.hpp"

namespace firesafe {

enum class record_kind {
  state_change,
  action,
  sms_delivered,
  call_placed,
  notification_failed,
  sensor_edge,
  power_change
};

const char* record_kind_name(record_kind k);

/// Transcript payload values: integers, strings and flags only. No floats,
/// so serialized transcripts stay byte-stable.
using payload_value = std::variant<std::int64_t, std::string, bool>;
using payload_map = std::map<std::string, payload_value>;

/// One canonical simulation output record. (t, seq) is strictly increasing
/// within a transcript; seq is the global total-order tiebreaker.
struct transcript_record {
  std::int64_t t = 0;
  std::int64_t seq = 0;
  record_kind kind = record_kind::state_change;
  payload_map payload;

  bool operator==(const transcript_record&) const = default;

  const payload_value* find(std::string_view key) const;
  std::int64_t int_at(std::string_view key) const;
  std::string str_at(std::string_view key) const;
};

/// One record as a canonical JSON line (keys sorted lexicographically, no
/// insignificant whitespace), without the trailing newline.
std::string record_to_json(const transcript_record& r);

/// Whole transcript as JSON Lines, one record per line, trailing newline on
/// every line. Byte-stable for golden tests.
std::string transcript_to_jsonl(std::span<const transcript_record> records);

/// Parses a JSON Lines transcript. Throws malformed_transcript with the
/// 1-based line number.
std::vector<transcript_record> parse_transcript(std::string_view jsonl);

}  // namespace firesafe
