// SPDX-License-Identifier: Apache-2.0
#include "firesafe/config.hpp"

#include <algorithm>
#include <cctype>

#include <json.hpp>

namespace firesafe {

namespace {

using nlohmann::json;

bool is_space(unsigned char c) { return std::isspace(c) != 0; }

input_role parse_input_role(std::string_view s, const std::string& path) {
  if (s == "smoke") return input_role::smoke;
  if (s == "reset") return input_role::reset;
  if (s == "restore") return input_role::restore;
  if (s == "unused") return input_role::unused;
  throw validation_error(path, "unknown input role '" + std::string(s) + "'");
}

relay_role parse_relay_role(std::string_view s, const std::string& path) {
  if (s == "contactor_coil") return relay_role::contactor_coil;
  if (s == "unused") return relay_role::unused;
  throw validation_error(path, "unknown relay role '" + std::string(s) + "'");
}

std::int64_t require_duration(const json& v, const std::string& path) {
  if (!v.is_number_integer())
    throw validation_error(path, "durations are integer milliseconds");
  return v.get<std::int64_t>();
}

double require_number(const json& v, const std::string& path) {
  if (!v.is_number()) throw validation_error(path, "expected a number");
  return v.get<double>();
}

std::string require_string(const json& v, const std::string& path) {
  if (!v.is_string()) throw validation_error(path, "expected a string");
  return v.get<std::string>();
}

phone_number require_phone(const json& v, const std::string& path) {
  if (!v.is_string()) throw validation_error(path, "expected a string");
  try {
    return validate_phone(v.get<std::string>());
  } catch (const invalid_phone& e) {
    throw validation_error(path, e.what());
  }
}

// A template must render within the 160-character SMS budget for every
// possible {time} value; "99999999 ms" bounds the expansion.
void check_template(const std::string& tmpl, const config& cfg,
                    const std::string& path) {
  static const std::array<std::string, 3> declared = {"site_name", "location",
                                                      "time"};
  for (const auto& name : template_placeholders(tmpl)) {
    if (std::find(declared.begin(), declared.end(), name) == declared.end())
      throw validation_error(path, "undeclared placeholder '" + name + "'");
  }
  std::map<std::string, std::string> bound{{"site_name", cfg.site_name},
                                           {"location", cfg.location},
                                           {"time", "99999999 ms"}};
  if (render_template(tmpl, bound).size() > 160)
    throw validation_error(path, "renders to more than 160 characters");
}

}  // namespace

phone_number validate_phone(std::string_view raw) {
  std::string s;
  s.reserve(raw.size());
  for (char c : raw)
    if (!is_space(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty() || s[0] != '+')
    throw invalid_phone("phone number must begin with '+'");
  const std::string_view rest = std::string_view(s).substr(1);
  if (!std::all_of(rest.begin(), rest.end(),
                   [](unsigned char c) { return std::isdigit(c) != 0; }))
    throw invalid_phone("phone number must be '+' followed by digits only");
  if (rest.size() < 8 || rest.size() > 15)
    throw invalid_phone("phone number must have 8 to 15 digits");
  return phone_number{std::move(s)};
}

int config::smoke_channel() const {
  for (int i = 0; i < kInputChannels; ++i)
    if (input_map[i] == input_role::smoke) return i + 1;
  return 0;
}

int config::reset_channel() const {
  for (int i = 0; i < kInputChannels; ++i)
    if (input_map[i] == input_role::reset) return i + 1;
  return 0;
}

std::optional<int> config::restore_channel() const {
  for (int i = 0; i < kInputChannels; ++i)
    if (input_map[i] == input_role::restore) return i + 1;
  return std::nullopt;
}

int config::contactor_relay() const {
  for (int i = 0; i < kRelayChannels; ++i)
    if (relay_map[i] == relay_role::contactor_coil) return i + 1;
  return 0;
}

std::string channel_name(int channel) {
  // Terminal labels are zero-based: channel 1 is D0.
  return "D" + std::to_string(channel - 1);
}

const char* input_role_name(input_role r) {
  switch (r) {
    case input_role::smoke: return "smoke";
    case input_role::reset: return "reset";
    case input_role::restore: return "restore";
    case input_role::unused: return "unused";
  }
  return "unused";
}

const char* relay_role_name(relay_role r) {
  switch (r) {
    case relay_role::contactor_coil: return "contactor_coil";
    case relay_role::unused: return "unused";
  }
  return "unused";
}

config parse_config(std::string_view text) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) throw syntax_error("configuration is not valid JSON");
  if (!doc.is_object())
    throw syntax_error("configuration must be a JSON object");

  config cfg;
  bool saw_owner = false, saw_fire_service = false, saw_location = false;

  for (const auto& [key, value] : doc.items()) {
    if (key == "site_name") {
      cfg.site_name = require_string(value, key);
    } else if (key == "location") {
      cfg.location = require_string(value, key);
      saw_location = true;
    } else if (key == "owner") {
      cfg.owner = require_phone(value, key);
      saw_owner = true;
    } else if (key == "fire_service") {
      cfg.fire_service = require_phone(value, key);
      saw_fire_service = true;
    } else if (key == "smoke_threshold") {
      cfg.smoke_threshold = require_number(value, key);
    } else if (key == "hysteresis_ratio") {
      cfg.hysteresis_ratio = require_number(value, key);
    } else if (key == "resend_delay") {
      cfg.timing.resend_delay = require_duration(value, "timing.resend_delay");
    } else if (key == "call_delay") {
      cfg.timing.call_delay = require_duration(value, "timing.call_delay");
    } else if (key == "debounce") {
      cfg.timing.debounce = require_duration(value, "timing.debounce");
    } else if (key == "initial_template") {
      cfg.initial_template = require_string(value, key);
    } else if (key == "reminder_template") {
      cfg.reminder_template = require_string(value, key);
    } else if (key == "input_map") {
      if (!value.is_object())
        throw validation_error("input_map", "expected an object");
      cfg.input_map.fill(input_role::unused);
      for (const auto& [ch, role] : value.items()) {
        const std::string path = "input_map." + ch;
        if (ch.size() != 1 || ch[0] < '1' || ch[0] > '8')
          throw validation_error(path, "channel must be \"1\"..\"8\"");
        cfg.input_map[ch[0] - '1'] = parse_input_role(require_string(role, path), path);
      }
    } else if (key == "relay_map") {
      if (!value.is_object())
        throw validation_error("relay_map", "expected an object");
      cfg.relay_map.fill(relay_role::unused);
      for (const auto& [ch, role] : value.items()) {
        const std::string path = "relay_map." + ch;
        if (ch.size() != 1 || ch[0] < '1' || ch[0] > '2')
          throw validation_error(path, "relay must be \"1\" or \"2\"");
        cfg.relay_map[ch[0] - '1'] = parse_relay_role(require_string(role, path), path);
      }
    } else if (key == "sms_retry_limit") {
      if (!value.is_number_integer())
        throw validation_error("sms_retry_limit", "expected an integer");
      cfg.sms_retry_limit = value.get<int>();
    } else if (key == "sms_retry_backoff") {
      cfg.sms_retry_backoff = require_duration(value, "sms_retry_backoff");
    } else {
      throw unknown_field(key);
    }
  }

  if (!saw_owner) throw validation_error("owner", "required field is missing");
  if (!saw_fire_service)
    throw validation_error("fire_service", "required field is missing");
  if (!saw_location)
    throw validation_error("location", "required field is missing");

  validate_config(cfg);
  return cfg;
}

void validate_config(const config& cfg) {
  if (!(cfg.smoke_threshold > 0.0 && cfg.smoke_threshold < 1.0))
    throw validation_error("smoke_threshold", "must be in (0, 1)");
  if (!(cfg.hysteresis_ratio > 0.0 && cfg.hysteresis_ratio <= 1.0))
    throw validation_error("hysteresis_ratio", "must be in (0, 1]");
  if (cfg.timing.resend_delay < 10000 || cfg.timing.resend_delay > 15000)
    throw validation_error("timing.resend_delay",
                           "must be within [10000, 15000] ms");
  if (cfg.timing.call_delay < cfg.timing.resend_delay)
    throw validation_error("timing.call_delay",
                           "must be >= timing.resend_delay");
  if (cfg.timing.debounce < 0 || cfg.timing.debounce > 5000)
    throw validation_error("timing.debounce", "must be within [0, 5000] ms");

  int smoke = 0, reset = 0, restore = 0;
  for (input_role r : cfg.input_map) {
    smoke += r == input_role::smoke;
    reset += r == input_role::reset;
    restore += r == input_role::restore;
  }
  if (smoke != 1)
    throw validation_error("input_map", "exactly one channel must be 'smoke'");
  if (reset != 1)
    throw validation_error("input_map", "exactly one channel must be 'reset'");
  if (restore > 1)
    throw validation_error("input_map", "at most one channel may be 'restore'");

  int coil = 0;
  for (relay_role r : cfg.relay_map) coil += r == relay_role::contactor_coil;
  if (coil != 1)
    throw validation_error("relay_map",
                           "exactly one relay must be 'contactor_coil'");

  check_template(cfg.initial_template, cfg, "initial_template");
  check_template(cfg.reminder_template, cfg, "reminder_template");

  if (cfg.sms_retry_limit < 1 || cfg.sms_retry_limit > 5)
    throw validation_error("sms_retry_limit", "must be within [1, 5]");
  if (cfg.sms_retry_backoff < 0)
    throw validation_error("sms_retry_backoff", "must be >= 0");
}

std::string serialize_config(const config& cfg) {
  json doc;
  doc["site_name"] = cfg.site_name;
  doc["location"] = cfg.location;
  doc["owner"] = cfg.owner.digits;
  doc["fire_service"] = cfg.fire_service.digits;
  doc["smoke_threshold"] = cfg.smoke_threshold;
  doc["hysteresis_ratio"] = cfg.hysteresis_ratio;
  doc["resend_delay"] = cfg.timing.resend_delay;
  doc["call_delay"] = cfg.timing.call_delay;
  doc["debounce"] = cfg.timing.debounce;
  doc["initial_template"] = cfg.initial_template;
  doc["reminder_template"] = cfg.reminder_template;
  json inputs;
  for (int i = 0; i < kInputChannels; ++i)
    inputs[std::to_string(i + 1)] = input_role_name(cfg.input_map[i]);
  doc["input_map"] = inputs;
  json relays;
  for (int i = 0; i < kRelayChannels; ++i)
    relays[std::to_string(i + 1)] = relay_role_name(cfg.relay_map[i]);
  doc["relay_map"] = relays;
  doc["sms_retry_limit"] = cfg.sms_retry_limit;
  doc["sms_retry_backoff"] = cfg.sms_retry_backoff;
  // nlohmann::json objects keep keys in lexicographic order; dump() without
  // indentation gives the canonical compact form.
  return doc.dump();
}

std::string render_template(std::string_view tmpl,
                            const std::map<std::string, std::string>& context) {
  std::string out;
  out.reserve(tmpl.size());
  std::size_t i = 0;
  while (i < tmpl.size()) {
    const char c = tmpl[i];
    if (c == '{') {
      const std::size_t close = tmpl.find('}', i + 1);
      if (close != std::string_view::npos) {
        std::string name(tmpl.substr(i + 1, close - i - 1));
        auto it = context.find(name);
        if (it == context.end()) throw missing_placeholder(name);
        out += it->second;
        i = close + 1;
        continue;
      }
    }
    out.push_back(c);
    ++i;
  }
  return out;
}

std::vector<std::string> template_placeholders(std::string_view tmpl) {
  std::vector<std::string> names;
  std::size_t i = 0;
  while (i < tmpl.size()) {
    if (tmpl[i] == '{') {
      const std::size_t close = tmpl.find('}', i + 1);
      if (close != std::string_view::npos) {
        names.emplace_back(tmpl.substr(i + 1, close - i - 1));
        i = close + 1;
        continue;
      }
    }
    ++i;
  }
  return names;
}

}  // namespace firesafe
