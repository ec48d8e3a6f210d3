// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "firesafe/errors.hpp"

namespace firesafe {

/// International-format phone number: '+' followed by 8..15 decimal digits.
struct phone_number {
  std::string digits;  // includes the leading '+'

  auto operator<=>(const phone_number&) const = default;
};

/// Normalizes `raw` (strips all whitespace) and validates the format.
/// Throws invalid_phone.
phone_number validate_phone(std::string_view raw);

/// Escalation timing, all in virtual milliseconds.
struct timing_plan {
  std::int64_t resend_delay = 12000;  // reminder wave, 10..15 s after activation
  std::int64_t call_delay = 15000;    // voice calls, anchored at activation
  std::int64_t debounce = 200;        // smoke edge must hold this long

  bool operator==(const timing_plan&) const = default;
};

enum class input_role { smoke, reset, restore, unused };
enum class relay_role { contactor_coil, unused };

constexpr int kInputChannels = 8;
constexpr int kRelayChannels = 2;

/// Validated alarm configuration. Field defaults are the documented ones;
/// owner, fire_service and location have no default and must come from the
/// parsed document.
struct config {
  std::string site_name = "facility";
  std::string location;
  phone_number owner;
  phone_number fire_service;
  double smoke_threshold = 0.5;   // in (0, 1)
  double hysteresis_ratio = 0.8;  // release point = threshold * ratio
  timing_plan timing;
  std::string initial_template =
      "FIRE ALERT at {site_name}: smoke detected, power cut off. Time: {time}.";
  std::string reminder_template =
      "FIRE ALERT at {site_name}: alarm still active. Location: {location}. "
      "Time: {time}.";
  std::array<input_role, kInputChannels> input_map = {
      input_role::smoke,  input_role::reset,  input_role::restore,
      input_role::unused, input_role::unused, input_role::unused,
      input_role::unused, input_role::unused};
  std::array<relay_role, kRelayChannels> relay_map = {relay_role::contactor_coil,
                                                      relay_role::unused};
  int sms_retry_limit = 3;             // total attempts, in [1, 5]
  std::int64_t sms_retry_backoff = 2000;  // ms between attempts

  bool operator==(const config&) const = default;

  /// 1-based channel carrying the given role. Exactly one smoke and one
  /// reset channel exist in any validated config; restore is optional.
  int smoke_channel() const;
  int reset_channel() const;
  std::optional<int> restore_channel() const;
  int contactor_relay() const;
};

/// Diagnostic name of a 1-based input channel: channel 1 is terminal "D0".
std::string channel_name(int channel);

const char* input_role_name(input_role r);
const char* relay_role_name(relay_role r);

/// Parses the flat JSON configuration document. Strict schema: unknown
/// fields are rejected. Absent optional fields take the documented defaults.
/// Throws syntax_error, validation_error, unknown_field.
config parse_config(std::string_view text);

/// Canonical serialization: keys sorted lexicographically, no insignificant
/// whitespace. parse_config(serialize_config(c)) == c for every valid c.
std::string serialize_config(const config& cfg);

/// Re-checks every config invariant; parse_config calls this before
/// returning. Throws validation_error with the offending field path.
void validate_config(const config& cfg);

/// Replaces each `{name}` token with context.at(name). Characters outside
/// placeholder tokens are copied verbatim. Throws missing_placeholder.
std::string render_template(std::string_view tmpl,
                            const std::map<std::string, std::string>& context);

/// Placeholder names referenced by a template, in order of appearance.
std::vector<std::string> template_placeholders(std::string_view tmpl);

}  // namespace firesafe
