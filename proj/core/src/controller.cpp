// SPDX-License-Identifier: Apache-2.0
#include "firesafe/controller.hpp"

#include <algorithm>

namespace firesafe {

namespace {

std::map<std::string, std::string> render_context(const config& cfg,
                                                  std::int64_t at) {
  return {{"site_name", cfg.site_name},
          {"location", cfg.location},
          {"time", std::to_string(at) + " ms"}};
}

// Full activation: cut power, sound the siren, light the way out, tell the
// owner, arm both timers. Entered from normal and, on re-ignition, from
// latched_tripped.
step_result activate(const controller_state& prev, const input_event& ev,
                     const config& cfg) {
  controller_state next = prev;
  next.current = phase::alarm_active;
  next.alarm_started_at = ev.at;
  next.resend_pending = true;
  next.call_pending = true;

  const auto ctx = render_context(cfg, ev.at);
  std::vector<action> actions;
  actions.emplace_back(de_energize_contactor{});
  actions.emplace_back(siren_on{});
  actions.emplace_back(emergency_light_on{});
  actions.emplace_back(send_sms{recipient::owner, cfg.owner,
                                render_template(cfg.initial_template, ctx)});
  actions.emplace_back(
      start_timer{timer_kind::resend, ev.at + cfg.timing.resend_delay});
  actions.emplace_back(
      start_timer{timer_kind::call, *next.alarm_started_at + cfg.timing.call_delay});
  return {next, std::move(actions)};
}

}  // namespace

const char* phase_name(phase p) {
  switch (p) {
    case phase::normal: return "NORMAL";
    case phase::alarm_active: return "ALARM_ACTIVE";
    case phase::reminded: return "REMINDED";
    case phase::escalated: return "ESCALATED";
    case phase::latched_tripped: return "LATCHED_TRIPPED";
  }
  return "NORMAL";
}

const char* timer_kind_name(timer_kind k) {
  return k == timer_kind::resend ? "RESEND" : "CALL";
}

const char* recipient_name(recipient r) {
  return r == recipient::owner ? "owner" : "fire_service";
}

const char* action_name(const action& a) {
  struct namer {
    const char* operator()(const de_energize_contactor&) { return "de_energize_contactor"; }
    const char* operator()(const energize_contactor&) { return "energize_contactor"; }
    const char* operator()(const siren_on&) { return "siren_on"; }
    const char* operator()(const siren_off&) { return "siren_off"; }
    const char* operator()(const emergency_light_on&) { return "emergency_light_on"; }
    const char* operator()(const emergency_light_off&) { return "emergency_light_off"; }
    const char* operator()(const send_sms&) { return "send_sms"; }
    const char* operator()(const dial&) { return "dial"; }
    const char* operator()(const start_timer&) { return "start_timer"; }
    const char* operator()(const cancel_timer&) { return "cancel_timer"; }
  };
  return std::visit(namer{}, a);
}

void check_state(const controller_state& s) {
  const bool timers_empty = !s.resend_pending && !s.call_pending;
  if ((s.current == phase::normal) != !s.alarm_started_at.has_value())
    throw invariant_violation(
        "controller: normal phase <=> alarm_started_at absent");
  if (s.current == phase::normal && !timers_empty)
    throw invariant_violation("controller: normal phase with pending timers");
  if (s.resend_pending && s.current != phase::alarm_active)
    throw invariant_violation(
        "controller: RESEND pending outside ALARM_ACTIVE");
  if (s.call_pending && s.current != phase::alarm_active &&
      s.current != phase::reminded)
    throw invariant_violation(
        "controller: CALL pending outside ALARM_ACTIVE/REMINDED");
  if ((s.current == phase::escalated || s.current == phase::latched_tripped) &&
      !timers_empty)
    throw invariant_violation(
        "controller: terminal phase with pending timers");
}

step_result step(const controller_state& state, const input_event& event,
                 const config& cfg) {
  switch (event.kind) {
    case event_kind::smoke_high:
      // Already-alarming phases ignore re-triggers so the timeline stays
      // monotone; a fresh edge after a reset starts a new alarm cycle.
      if (state.current == phase::normal ||
          state.current == phase::latched_tripped)
        return activate(state, event, cfg);
      return {state, {}};

    case event_kind::smoke_low:
      // Smoke clearing never silences the siren; an explicit reset does.
      return {state, {}};

    case event_kind::reset_pressed: {
      if (state.current != phase::alarm_active &&
          state.current != phase::reminded && state.current != phase::escalated)
        return {state, {}};
      controller_state next = state;
      next.current = phase::latched_tripped;
      next.resend_pending = false;
      next.call_pending = false;
      std::vector<action> actions;
      actions.emplace_back(siren_off{});
      if (state.resend_pending)
        actions.emplace_back(cancel_timer{timer_kind::resend});
      if (state.call_pending)
        actions.emplace_back(cancel_timer{timer_kind::call});
      return {next, std::move(actions)};
    }

    case event_kind::restore_pressed: {
      // Power comes back only from the silenced state; restoring during an
      // active alarm is refused.
      if (state.current != phase::latched_tripped) return {state, {}};
      controller_state next;
      next.current = phase::normal;
      return {next, {energize_contactor{}, emergency_light_off{}}};
    }

    case event_kind::timer_fired: {
      if (event.timer == timer_kind::resend) {
        if (state.current != phase::alarm_active || !state.resend_pending)
          return {state, {}};
        controller_state next = state;
        next.current = phase::reminded;
        next.resend_pending = false;
        const auto ctx = render_context(cfg, event.at);
        const std::string body = render_template(cfg.reminder_template, ctx);
        return {next,
                {send_sms{recipient::owner, cfg.owner, body},
                 send_sms{recipient::fire_service, cfg.fire_service, body}}};
      }
      // CALL
      if (!state.call_pending || (state.current != phase::alarm_active &&
                                  state.current != phase::reminded))
        return {state, {}};
      controller_state next = state;
      next.current = phase::escalated;
      next.call_pending = false;
      std::vector<action> actions;
      if (state.resend_pending) {
        // Escalation supersedes a still-armed reminder.
        next.resend_pending = false;
        actions.emplace_back(cancel_timer{timer_kind::resend});
      }
      actions.emplace_back(dial{recipient::owner, cfg.owner});
      actions.emplace_back(dial{recipient::fire_service, cfg.fire_service});
      return {next, std::move(actions)};
    }
  }
  return {state, {}};
}

std::vector<timeline_entry> escalation_timeline(const config& cfg) {
  std::vector<timeline_entry> timeline;
  auto append = [&](std::int64_t offset, const std::vector<action>& actions) {
    for (const action& a : actions) {
      if (std::holds_alternative<de_energize_contactor>(a))
        timeline.push_back({offset, "cutoff"});
      else if (std::holds_alternative<siren_on>(a))
        timeline.push_back({offset, "siren_on"});
      else if (std::holds_alternative<emergency_light_on>(a))
        timeline.push_back({offset, "emergency_light_on"});
      else if (const auto* sms = std::get_if<send_sms>(&a))
        timeline.push_back({offset, std::string("sms_") + recipient_name(sms->to_role)});
      else if (const auto* d = std::get_if<dial>(&a))
        timeline.push_back({offset, std::string("call_") + recipient_name(d->to_role)});
    }
  };

  controller_state state;
  auto r = step(state, input_event::smoke_high(0), cfg);
  state = r.state;
  append(0, r.actions);

  // Fire armed timers in (fire_at, RESEND-before-CALL) order.
  std::vector<start_timer> armed;
  for (const action& a : r.actions)
    if (const auto* t = std::get_if<start_timer>(&a)) armed.push_back(*t);
  std::stable_sort(armed.begin(), armed.end(),
                   [](const start_timer& a, const start_timer& b) {
                     if (a.fire_at != b.fire_at) return a.fire_at < b.fire_at;
                     return a.kind == timer_kind::resend &&
                            b.kind == timer_kind::call;
                   });
  for (const start_timer& t : armed) {
    auto fired = step(state, input_event::timer_fired(t.kind, t.fire_at), cfg);
    state = fired.state;
    append(t.fire_at, fired.actions);
  }
  return timeline;
}

}  // namespace firesafe
