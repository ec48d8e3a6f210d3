// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "firesafe/controller.hpp"
#include "test_util.hpp"

using namespace firesafe;

namespace {

const config kCfg = fstest::default_config();

controller_state alarm_state(std::int64_t started_at, bool resend, bool call,
                             phase p) {
  controller_state s;
  s.current = p;
  s.alarm_started_at = started_at;
  s.resend_pending = resend;
  s.call_pending = call;
  return s;
}

bool has_action(const std::vector<action>& actions, const char* name) {
  for (const auto& a : actions)
    if (std::string(action_name(a)) == name) return true;
  return false;
}

}  // namespace

TEST_CASE("smoke in NORMAL activates the full wave-1 response") {
  const auto [state, actions] =
      step(controller_state{}, input_event::smoke_high(0), kCfg);
  CHECK(state.current == phase::alarm_active);
  CHECK(state.alarm_started_at == 0);
  CHECK(state.resend_pending);
  CHECK(state.call_pending);

  REQUIRE(actions.size() == 6);
  CHECK(std::holds_alternative<de_energize_contactor>(actions[0]));
  CHECK(std::holds_alternative<siren_on>(actions[1]));
  CHECK(std::holds_alternative<emergency_light_on>(actions[2]));
  const auto& sms = std::get<send_sms>(actions[3]);
  CHECK(sms.to_role == recipient::owner);
  CHECK(sms.to == kCfg.owner);
  CHECK(sms.body ==
        "FIRE ALERT at Market Circle Warehouse: smoke detected, power cut "
        "off. Time: 0 ms.");
  CHECK(std::get<start_timer>(actions[4]) ==
        start_timer{timer_kind::resend, 12000});
  CHECK(std::get<start_timer>(actions[5]) ==
        start_timer{timer_kind::call, 15000});
}

TEST_CASE("RESEND fire sends the reminder to owner then fire service") {
  const auto start = alarm_state(0, true, true, phase::alarm_active);
  const auto [state, actions] =
      step(start, input_event::timer_fired(timer_kind::resend, 12000), kCfg);
  CHECK(state.current == phase::reminded);
  CHECK_FALSE(state.resend_pending);
  CHECK(state.call_pending);

  REQUIRE(actions.size() == 2);
  const auto& first = std::get<send_sms>(actions[0]);
  const auto& second = std::get<send_sms>(actions[1]);
  CHECK(first.to_role == recipient::owner);
  CHECK(second.to_role == recipient::fire_service);
  CHECK(first.body == second.body);
  CHECK(first.body.find("Market Circle, Takoradi") != std::string::npos);
}

TEST_CASE("CALL fire escalates to voice calls, owner first") {
  const auto start = alarm_state(0, false, true, phase::reminded);
  const auto [state, actions] =
      step(start, input_event::timer_fired(timer_kind::call, 15000), kCfg);
  CHECK(state.current == phase::escalated);
  CHECK_FALSE(state.call_pending);
  REQUIRE(actions.size() == 2);
  CHECK(std::get<dial>(actions[0]).to_role == recipient::owner);
  CHECK(std::get<dial>(actions[1]).to_role == recipient::fire_service);
}

TEST_CASE("reset silences and cancels but leaves power cut") {
  const auto start = alarm_state(0, true, true, phase::alarm_active);
  const auto [state, actions] = step(start, input_event::reset(5000), kCfg);
  CHECK(state.current == phase::latched_tripped);
  CHECK_FALSE(state.resend_pending);
  CHECK_FALSE(state.call_pending);
  REQUIRE(actions.size() == 3);
  CHECK(std::holds_alternative<siren_off>(actions[0]));
  CHECK(std::get<cancel_timer>(actions[1]) == cancel_timer{timer_kind::resend});
  CHECK(std::get<cancel_timer>(actions[2]) == cancel_timer{timer_kind::call});
  CHECK_FALSE(has_action(actions, "energize_contactor"));
}

TEST_CASE("reset in NORMAL is a no-op") {
  const auto [state, actions] =
      step(controller_state{}, input_event::reset(100), kCfg);
  CHECK(state == controller_state{});
  CHECK(actions.empty());
}

TEST_CASE("restore from LATCHED_TRIPPED re-energizes and clears the light") {
  controller_state latched;
  latched.current = phase::latched_tripped;
  latched.alarm_started_at = 0;
  const auto [state, actions] = step(latched, input_event::restore(20000), kCfg);
  CHECK(state.current == phase::normal);
  CHECK_FALSE(state.alarm_started_at.has_value());
  REQUIRE(actions.size() == 2);
  CHECK(std::holds_alternative<energize_contactor>(actions[0]));
  CHECK(std::holds_alternative<emergency_light_off>(actions[1]));
}

TEST_CASE("quiescence and irrelevant events") {
  const controller_state normal;
  CHECK(step(normal, input_event::smoke_low(1), kCfg).actions.empty());
  CHECK(step(normal, input_event::timer_fired(timer_kind::resend, 1), kCfg)
            .actions.empty());
  CHECK(step(normal, input_event::timer_fired(timer_kind::call, 1), kCfg)
            .actions.empty());
  CHECK(step(normal, input_event::restore(1), kCfg).actions.empty());

  // Re-trigger while already alarming is ignored.
  const auto active = alarm_state(0, true, true, phase::alarm_active);
  const auto again = step(active, input_event::smoke_high(100), kCfg);
  CHECK(again.state == active);
  CHECK(again.actions.empty());

  // Restore during an active alarm is refused.
  CHECK(step(active, input_event::restore(100), kCfg).actions.empty());
  controller_state escalated;
  escalated.current = phase::escalated;
  escalated.alarm_started_at = 0;
  CHECK(step(escalated, input_event::restore(100), kCfg).actions.empty());

  // Reset after escalation still silences the siren.
  const auto after = step(escalated, input_event::reset(16000), kCfg);
  CHECK(after.state.current == phase::latched_tripped);
  REQUIRE(after.actions.size() == 1);
  CHECK(std::holds_alternative<siren_off>(after.actions[0]));
}

TEST_CASE("a fresh edge after reset starts a new alarm cycle") {
  controller_state latched;
  latched.current = phase::latched_tripped;
  latched.alarm_started_at = 0;
  const auto [state, actions] = step(latched, input_event::smoke_high(30000), kCfg);
  CHECK(state.current == phase::alarm_active);
  CHECK(state.alarm_started_at == 30000);
  CHECK(has_action(actions, "siren_on"));
  CHECK(has_action(actions, "de_energize_contactor"));  // idempotent re-cut
  CHECK(std::get<start_timer>(actions[4]).fire_at == 42000);
}

TEST_CASE("step is pure and deterministic") {
  const auto active = alarm_state(0, true, true, phase::alarm_active);
  const auto ev = input_event::timer_fired(timer_kind::resend, 12000);
  const auto a = step(active, ev, kCfg);
  const auto b = step(active, ev, kCfg);
  CHECK(a.state == b.state);
  CHECK(a.actions == b.actions);
}

TEST_CASE("escalation timeline with defaults") {
  const std::vector<timeline_entry> expected = {
      {0, "cutoff"},          {0, "siren_on"},
      {0, "emergency_light_on"}, {0, "sms_owner"},
      {12000, "sms_owner"},   {12000, "sms_fire_service"},
      {15000, "call_owner"},  {15000, "call_fire_service"},
  };
  CHECK(escalation_timeline(kCfg) == expected);
}

TEST_CASE("escalation timeline breaks resend/call ties resend-first") {
  config cfg = kCfg;
  cfg.timing.resend_delay = 15000;
  cfg.timing.call_delay = 15000;
  const auto timeline = escalation_timeline(cfg);
  REQUIRE(timeline.size() == 8);
  CHECK(timeline[4] == timeline_entry{15000, "sms_owner"});
  CHECK(timeline[5] == timeline_entry{15000, "sms_fire_service"});
  CHECK(timeline[6] == timeline_entry{15000, "call_owner"});
  CHECK(timeline[7] == timeline_entry{15000, "call_fire_service"});
}

TEST_CASE("escalation timeline passes call_delay through") {
  config cfg = kCfg;
  cfg.timing.call_delay = 30000;
  const auto timeline = escalation_timeline(cfg);
  REQUIRE(timeline.size() == 8);
  CHECK(timeline[6] == timeline_entry{30000, "call_owner"});
  CHECK(timeline[7] == timeline_entry{30000, "call_fire_service"});
}

TEST_CASE("owner precedes fire service in every transition") {
  // Random walk over the event alphabet; in each emitted action list any
  // fire-service notification must follow the owner one of the same kind.
  std::mt19937 rng(99);
  std::uniform_int_distribution<int> pick(0, 5);
  for (int run = 0; run < 500; ++run) {
    controller_state state;
    std::int64_t t = 0;
    for (int steps = 0; steps < 8; ++steps) {
      t += 1000;
      input_event ev{};
      switch (pick(rng)) {
        case 0: ev = input_event::smoke_high(t); break;
        case 1: ev = input_event::smoke_low(t); break;
        case 2: ev = input_event::reset(t); break;
        case 3: ev = input_event::restore(t); break;
        case 4: ev = input_event::timer_fired(timer_kind::resend, t); break;
        default: ev = input_event::timer_fired(timer_kind::call, t); break;
      }
      const auto result = step(state, ev, kCfg);
      check_state(result.state);

      bool owner_sms = false, owner_dial = false;
      for (const auto& a : result.actions) {
        if (const auto* sms = std::get_if<send_sms>(&a)) {
          if (sms->to_role == recipient::owner) owner_sms = true;
          if (sms->to_role == recipient::fire_service) CHECK(owner_sms);
        } else if (const auto* d = std::get_if<dial>(&a)) {
          if (d->to_role == recipient::owner) owner_dial = true;
          if (d->to_role == recipient::fire_service) CHECK(owner_dial);
        }
      }
      // Power cutoff is never later than the audible alarm.
      if (has_action(result.actions, "siren_on"))
        CHECK(has_action(result.actions, "de_energize_contactor"));
      state = result.state;
    }
  }
}

TEST_CASE("state invariant checker rejects broken states") {
  controller_state bad;
  bad.current = phase::normal;
  bad.resend_pending = true;
  CHECK_THROWS_AS(check_state(bad), invariant_violation);

  controller_state bad2;
  bad2.current = phase::escalated;
  bad2.alarm_started_at = 0;
  bad2.call_pending = true;
  CHECK_THROWS_AS(check_state(bad2), invariant_violation);

  controller_state bad3;
  bad3.current = phase::reminded;
  bad3.alarm_started_at = 0;
  bad3.resend_pending = true;  // RESEND may only pend in ALARM_ACTIVE
  CHECK_THROWS_AS(check_state(bad3), invariant_violation);
}
