// SPDX-License-Identifier: Apache-2.0
#include "firesafe/transcript.hpp"

#include <json.hpp>

namespace firesafe {

namespace {

using nlohmann::json;

record_kind kind_from_name(std::string_view name, std::size_t line) {
  if (name == "STATE_CHANGE") return record_kind::state_change;
  if (name == "ACTION") return record_kind::action;
  if (name == "SMS_DELIVERED") return record_kind::sms_delivered;
  if (name == "CALL_PLACED") return record_kind::call_placed;
  if (name == "NOTIFICATION_FAILED") return record_kind::notification_failed;
  if (name == "SENSOR_EDGE") return record_kind::sensor_edge;
  if (name == "POWER_CHANGE") return record_kind::power_change;
  throw malformed_transcript(line, "unknown record kind '" + std::string(name) + "'");
}

}  // namespace

const char* record_kind_name(record_kind k) {
  switch (k) {
    case record_kind::state_change: return "STATE_CHANGE";
    case record_kind::action: return "ACTION";
    case record_kind::sms_delivered: return "SMS_DELIVERED";
    case record_kind::call_placed: return "CALL_PLACED";
    case record_kind::notification_failed: return "NOTIFICATION_FAILED";
    case record_kind::sensor_edge: return "SENSOR_EDGE";
    case record_kind::power_change: return "POWER_CHANGE";
  }
  return "STATE_CHANGE";
}

const payload_value* transcript_record::find(std::string_view key) const {
  auto it = payload.find(std::string(key));
  return it == payload.end() ? nullptr : &it->second;
}

std::int64_t transcript_record::int_at(std::string_view key) const {
  const payload_value* v = find(key);
  if (!v || !std::holds_alternative<std::int64_t>(*v))
    throw error("payload key '" + std::string(key) + "' is not an integer");
  return std::get<std::int64_t>(*v);
}

std::string transcript_record::str_at(std::string_view key) const {
  const payload_value* v = find(key);
  if (!v || !std::holds_alternative<std::string>(*v))
    throw error("payload key '" + std::string(key) + "' is not a string");
  return std::get<std::string>(*v);
}

std::string record_to_json(const transcript_record& r) {
  json j;
  j["kind"] = record_kind_name(r.kind);
  json payload = json::object();
  for (const auto& [key, value] : r.payload) {
    std::visit([&, k = key](const auto& v) { payload[k] = v; }, value);
  }
  j["payload"] = std::move(payload);
  j["seq"] = r.seq;
  j["t"] = r.t;
  return j.dump();
}

std::string transcript_to_jsonl(std::span<const transcript_record> records) {
  std::string out;
  for (const auto& r : records) {
    out += record_to_json(r);
    out += '\n';
  }
  return out;
}

std::vector<transcript_record> parse_transcript(std::string_view jsonl) {
  std::vector<transcript_record> records;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < jsonl.size()) {
    std::size_t end = jsonl.find('\n', pos);
    if (end == std::string_view::npos) end = jsonl.size();
    const std::string_view line = jsonl.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.empty()) continue;

    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object())
      throw malformed_transcript(line_no, "not a JSON object");
    if (!j.contains("kind") || !j["kind"].is_string() || !j.contains("seq") ||
        !j["seq"].is_number_integer() || !j.contains("t") ||
        !j["t"].is_number_integer() || !j.contains("payload") ||
        !j["payload"].is_object())
      throw malformed_transcript(line_no, "missing or mistyped record field");

    transcript_record r;
    r.t = j["t"].get<std::int64_t>();
    r.seq = j["seq"].get<std::int64_t>();
    r.kind = kind_from_name(j["kind"].get<std::string>(), line_no);
    for (const auto& [key, value] : j["payload"].items()) {
      if (value.is_number_integer())
        r.payload.emplace(key, value.get<std::int64_t>());
      else if (value.is_string())
        r.payload.emplace(key, value.get<std::string>());
      else if (value.is_boolean())
        r.payload.emplace(key, value.get<bool>());
      else
        throw malformed_transcript(line_no, "payload value for '" + key +
                                                "' is not int/string/bool");
    }
    records.push_back(std::move(r));
  }
  return records;
}

}  // namespace firesafe
