// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "firesafe/transcript.hpp"

namespace firesafe {

struct incident_record {
  std::string category;
  std::int64_t count = 0;

  bool operator==(const incident_record&) const = default;
};

/// Parses the incident CSV: header `category,count`, UTF-8, LF line endings.
/// A category may contain commas; the count is everything after the last
/// one. Throws csv_error with the offending 1-based line.
std::vector<incident_record> parse_incident_csv(std::string_view text);

struct incident_summary {
  std::int64_t total = 0;
  std::optional<incident_record> max;
  std::optional<incident_record> min;
  std::vector<incident_record> ranked;  // by count desc, ties by category asc
};

/// Aggregates incident records. Categories must be unique (throws
/// duplicate_category); empty input yields an empty summary with total 0.
incident_summary aggregate(std::span<const incident_record> records);

struct transcript_summary {
  std::int64_t detections = 0;    // HIGH sensor edges
  std::int64_t sms_sent = 0;      // SMS_DELIVERED records
  std::int64_t calls_placed = 0;  // CALL_PLACED records
  std::int64_t failures = 0;      // NOTIFICATION_FAILED records
  std::optional<std::int64_t> time_to_cutoff;     // first power-off - first HIGH edge
  std::optional<std::int64_t> time_to_first_sms;  // first delivery - first HIGH edge

  bool operator==(const transcript_summary&) const = default;
};

transcript_summary summarize_transcript(std::span<const transcript_record> t);

}  // namespace firesafe
