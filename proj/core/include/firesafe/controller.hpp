// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "firesafe/config.hpp"

namespace firesafe {

enum class phase {
  normal,
  alarm_active,    // wave 1 sent, reminder and call timers armed
  reminded,        // wave 2 sent, call timer armed
  escalated,       // voice calls placed
  latched_tripped  // reset pressed: siren silenced, power still cut
};

const char* phase_name(phase p);

enum class timer_kind { resend, call };
const char* timer_kind_name(timer_kind k);

enum class recipient { owner, fire_service };
const char* recipient_name(recipient r);

// Side-effect commands. Within one transition's action list every
// notification to the owner precedes the same-kind one to the fire service.
struct de_energize_contactor {
  bool operator==(const de_energize_contactor&) const = default;
};
struct energize_contactor {
  bool operator==(const energize_contactor&) const = default;
};
struct siren_on {
  bool operator==(const siren_on&) const = default;
};
struct siren_off {
  bool operator==(const siren_off&) const = default;
};
struct emergency_light_on {
  bool operator==(const emergency_light_on&) const = default;
};
struct emergency_light_off {
  bool operator==(const emergency_light_off&) const = default;
};
struct send_sms {
  recipient to_role;
  phone_number to;
  std::string body;
  bool operator==(const send_sms&) const = default;
};
struct dial {
  recipient to_role;
  phone_number to;
  bool operator==(const dial&) const = default;
};
struct start_timer {
  timer_kind kind;
  std::int64_t fire_at;
  bool operator==(const start_timer&) const = default;
};
struct cancel_timer {
  timer_kind kind;
  bool operator==(const cancel_timer&) const = default;
};

using action =
    std::variant<de_energize_contactor, energize_contactor, siren_on,
                 siren_off, emergency_light_on, emergency_light_off, send_sms,
                 dial, start_timer, cancel_timer>;

/// snake_case name of the action alternative, e.g. "de_energize_contactor".
const char* action_name(const action& a);

enum class event_kind {
  smoke_high,
  smoke_low,
  reset_pressed,
  restore_pressed,
  timer_fired
};

struct input_event {
  event_kind kind;
  std::int64_t at = 0;
  timer_kind timer = timer_kind::resend;  // meaningful for timer_fired only

  static input_event smoke_high(std::int64_t at) {
    return {event_kind::smoke_high, at, timer_kind::resend};
  }
  static input_event smoke_low(std::int64_t at) {
    return {event_kind::smoke_low, at, timer_kind::resend};
  }
  static input_event reset(std::int64_t at) {
    return {event_kind::reset_pressed, at, timer_kind::resend};
  }
  static input_event restore(std::int64_t at) {
    return {event_kind::restore_pressed, at, timer_kind::resend};
  }
  static input_event timer_fired(timer_kind k, std::int64_t at) {
    return {event_kind::timer_fired, at, k};
  }
};

struct controller_state {
  phase current = phase::normal;
  std::optional<std::int64_t> alarm_started_at;
  bool resend_pending = false;
  bool call_pending = false;

  bool operator==(const controller_state&) const = default;
};

/// Throws invariant_violation if the state breaks any structural rule
/// (normal <=> no alarm anchor and no timers, pending timers only in the
/// phases that may own them).
void check_state(const controller_state& s);

struct step_result {
  controller_state state;
  std::vector<action> actions;
};

/// The escalation protocol as a pure, clocked transition function. Every
/// event is legal in every phase; irrelevant events return an empty action
/// list. No hidden state, no real clock.
step_result step(const controller_state& state, const input_event& event,
                 const config& cfg);

struct timeline_entry {
  std::int64_t offset_ms;
  std::string kind;

  bool operator==(const timeline_entry&) const = default;
};

/// The exact schedule step() produces for an uninterrupted alarm starting at
/// offset 0: one entry per plant or notification action, in emission order.
std::vector<timeline_entry> escalation_timeline(const config& cfg);

}  // namespace firesafe
