// SPDX-License-Identifier: Apache-2.0
#include "firesafe/sim.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

namespace firesafe {

namespace {

using nlohmann::json;

scenario_event::kind event_kind_from_name(std::string_view name) {
  if (name == "SET_SMOKE") return scenario_event::kind::set_smoke;
  if (name == "PRESS_RESET") return scenario_event::kind::press_reset;
  if (name == "PRESS_RESTORE") return scenario_event::kind::press_restore;
  if (name == "MAINS_FAIL") return scenario_event::kind::mains_fail;
  if (name == "MAINS_RESTORE") return scenario_event::kind::mains_restore;
  if (name == "MODEM_FAULT") return scenario_event::kind::modem_fault;
  if (name == "BACKUP_FAIL") return scenario_event::kind::backup_fail;
  throw scenario_error("unknown event kind '" + std::string(name) + "'");
}

std::int64_t require_event_int(const json& ev, const char* key) {
  if (!ev.contains(key) || !ev[key].is_number_integer())
    throw scenario_error(std::string("event field '") + key +
                         "' must be an integer");
  return ev[key].get<std::int64_t>();
}

}  // namespace

const char* scenario_event_kind_name(scenario_event::kind k) {
  switch (k) {
    case scenario_event::kind::set_smoke: return "SET_SMOKE";
    case scenario_event::kind::press_reset: return "PRESS_RESET";
    case scenario_event::kind::press_restore: return "PRESS_RESTORE";
    case scenario_event::kind::mains_fail: return "MAINS_FAIL";
    case scenario_event::kind::mains_restore: return "MAINS_RESTORE";
    case scenario_event::kind::modem_fault: return "MODEM_FAULT";
    case scenario_event::kind::backup_fail: return "BACKUP_FAIL";
  }
  return "SET_SMOKE";
}

scenario parse_scenario(std::string_view text) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded() || !doc.is_object())
    throw scenario_error("scenario is not a JSON object");

  scenario s;
  for (const auto& [key, value] : doc.items()) {
    if (key == "name") {
      if (!value.is_string()) throw scenario_error("'name' must be a string");
      s.name = value.get<std::string>();
    } else if (key == "horizon_ms") {
      if (!value.is_number_integer())
        throw scenario_error("'horizon_ms' must be an integer");
      s.horizon = value.get<std::int64_t>();
    } else if (key == "events") {
      if (!value.is_array()) throw scenario_error("'events' must be an array");
      for (const auto& ev : value) {
        if (!ev.is_object()) throw scenario_error("event must be an object");
        scenario_event e;
        e.at = require_event_int(ev, "at_ms");
        if (!ev.contains("kind") || !ev["kind"].is_string())
          throw scenario_error("event field 'kind' must be a string");
        e.k = event_kind_from_name(ev["kind"].get<std::string>());
        switch (e.k) {
          case scenario_event::kind::set_smoke:
            if (!ev.contains("level") || !ev["level"].is_number())
              throw scenario_error("SET_SMOKE needs a numeric 'level'");
            e.level = ev["level"].get<double>();
            break;
          case scenario_event::kind::modem_fault: {
            if (!ev.contains("match") || !ev["match"].is_string() ||
                !ev.contains("behavior") || !ev["behavior"].is_string())
              throw scenario_error(
                  "MODEM_FAULT needs string 'match' and 'behavior'");
            const auto match =
                fault_match_from_name(ev["match"].get<std::string>());
            const auto behavior =
                fault_behavior_from_name(ev["behavior"].get<std::string>());
            if (!match) throw scenario_error("unknown fault match");
            if (!behavior) throw scenario_error("unknown fault behavior");
            e.fault.match = *match;
            e.fault.behavior = *behavior;
            if (ev.contains("code")) e.fault.code = static_cast<int>(require_event_int(ev, "code"));
            if (ev.contains("count")) e.fault_count = static_cast<int>(require_event_int(ev, "count"));
            break;
          }
          default:
            break;
        }
        s.events.push_back(e);
      }
    } else {
      throw scenario_error("unknown scenario field '" + key + "'");
    }
  }

  std::stable_sort(s.events.begin(), s.events.end(),
                   [](const scenario_event& a, const scenario_event& b) {
                     return a.at < b.at;
                   });
  validate_scenario(s);
  return s;
}

void validate_scenario(const scenario& s) {
  if (s.horizon < 0) throw scenario_error("horizon must be >= 0");
  std::int64_t prev = 0;
  for (const auto& e : s.events) {
    if (e.at < 0) throw scenario_error("event time must be >= 0");
    if (e.at < prev) throw scenario_error("events must be sorted by time");
    prev = e.at;
    if (e.k == scenario_event::kind::set_smoke &&
        (e.level < 0.0 || e.level > 1.0))
      throw scenario_error("smoke level must be within [0, 1]");
    if (e.k == scenario_event::kind::modem_fault && e.fault_count < 1)
      throw scenario_error("fault count must be >= 1");
    if (e.at > s.horizon)
      throw scenario_error("horizon must cover every event");
  }
}

engine::engine(const config& cfg, const scenario& s, byte_link& link,
               virtual_clock& clock)
    : cfg_(cfg),
      scenario_(s),
      link_(link),
      clock_(clock),
      session_(link),
      queue_(clock) {
  last_power_ = {plant_.mains_present, plant_.backup_ok,
                 plant_.contactor_energized, plant_.loads_powered(),
                 plant_.controller_powered()};
}

void engine::record(record_kind kind, payload_map payload) {
  transcript_record r;
  r.t = clock_.now;
  r.seq = next_seq_++;
  r.kind = kind;
  r.payload = std::move(payload);
  records_.push_back(std::move(r));
}

void engine::record_power_if_changed() {
  const power_snapshot now{plant_.mains_present, plant_.backup_ok,
                           plant_.contactor_energized, plant_.loads_powered(),
                           plant_.controller_powered()};
  if (now == last_power_) return;
  last_power_ = now;
  record(record_kind::power_change,
         {{"backup_ok", now.backup},
          {"contactor", now.contactor},
          {"controller_powered", now.controller},
          {"loads_powered", now.loads},
          {"mains", now.mains}});
}

void engine::reboot_controller() {
  // Power returned after a total outage: volatile state is gone, the IC
  // boots to NORMAL, armed timers are lost, and the current sensor level is
  // taken as the baseline (no synthetic edge).
  controller_ = controller_state{};
  armed_[0] = armed_[1] = armed_timer{};
  ++timer_generation_;
  delivered_ = plant_.sensor_output;
  ++edge_generation_;
  record(record_kind::state_change, {{"phase", std::string(phase_name(phase::normal))}});
}

void engine::handle_set_smoke(double level) {
  plant_.smoke_level = level;
  const sensor_level next = sensor_update(plant_.sensor_output, level, cfg_);
  if (next == plant_.sensor_output) return;
  plant_.sensor_output = next;
  ++edge_generation_;
  if (plant_.sensor_output != delivered_)
    queue_.schedule(clock_.now + cfg_.timing.debounce,
                    queued_event{queued_event::kind::confirm,
                                 {},
                                 {},
                                 sensor_confirm{edge_generation_}});
}

void engine::handle_scripted(const scenario_event& ev) {
  switch (ev.k) {
    case scenario_event::kind::set_smoke:
      handle_set_smoke(ev.level);
      break;
    case scenario_event::kind::press_reset:
      if (plant_.controller_powered())
        deliver(input_event::reset(clock_.now));
      break;
    case scenario_event::kind::press_restore:
      // A restore input must exist on the panel to be pressable.
      if (plant_.controller_powered() && cfg_.restore_channel())
        deliver(input_event::restore(clock_.now));
      break;
    case scenario_event::kind::mains_fail:
      plant_.mains_present = false;
      record_power_if_changed();
      break;
    case scenario_event::kind::mains_restore: {
      const bool was_dead = !plant_.controller_powered();
      plant_.mains_present = true;
      record_power_if_changed();
      if (was_dead) reboot_controller();
      break;
    }
    case scenario_event::kind::backup_fail:
      plant_.backup_ok = false;
      record_power_if_changed();
      break;
    case scenario_event::kind::modem_fault:
      link_.inject_fault(ev.fault, ev.fault_count);
      break;
  }
}

void engine::deliver(const input_event& ev) {
  const step_result result = step(controller_, ev, cfg_);
  check_state(result.state);

  if (result.state.current != controller_.current)
    record(record_kind::state_change,
           {{"phase", std::string(phase_name(result.state.current))}});
  controller_ = result.state;

  // All of a transition's actions are stamped at the emitting timestamp;
  // execution below may advance the clock (retries, timeouts).
  for (const action& a : result.actions) {
    payload_map p{{"action", std::string(action_name(a))}};
    if (const auto* sms = std::get_if<send_sms>(&a)) {
      p.emplace("body", sms->body);
      p.emplace("role", std::string(recipient_name(sms->to_role)));
      p.emplace("to", sms->to.digits);
    } else if (const auto* d = std::get_if<dial>(&a)) {
      p.emplace("role", std::string(recipient_name(d->to_role)));
      p.emplace("to", d->to.digits);
    } else if (const auto* st = std::get_if<start_timer>(&a)) {
      p.emplace("fire_at", st->fire_at);
      p.emplace("timer", std::string(timer_kind_name(st->kind)));
    } else if (const auto* ct = std::get_if<cancel_timer>(&a)) {
      p.emplace("timer", std::string(timer_kind_name(ct->kind)));
    }
    record(record_kind::action, std::move(p));
  }

  for (const action& a : result.actions) execute(a);
}

void engine::execute(const action& a) {
  if (const auto* sms = std::get_if<send_sms>(&a)) {
    ++sms_actions_;
    const sms_outcome outcome =
        send_sms_with_retry(session_, sms->to, sms->body, cfg_);
    if (outcome.sent) {
      ++sms_delivered_;
      record(record_kind::sms_delivered,
             {{"attempts", static_cast<std::int64_t>(outcome.attempts)},
              {"body", sms->body},
              {"ref", static_cast<std::int64_t>(outcome.message_ref)},
              {"role", std::string(recipient_name(sms->to_role))},
              {"to", sms->to.digits}});
    } else {
      ++sms_failed_;
      record(record_kind::notification_failed,
             {{"attempts", static_cast<std::int64_t>(outcome.attempts)},
              {"kind", std::string("SMS")},
              {"role", std::string(recipient_name(sms->to_role))},
              {"to", sms->to.digits}});
    }
    return;
  }
  if (const auto* d = std::get_if<dial>(&a)) {
    ++dial_actions_;
    const call_outcome outcome = place_call(session_, d->to);
    if (outcome.placed) {
      ++calls_placed_;
      record(record_kind::call_placed,
             {{"role", std::string(recipient_name(d->to_role))},
              {"to", d->to.digits}});
    } else {
      ++calls_failed_;
      record(record_kind::notification_failed,
             {{"attempts", std::int64_t{1}},
              {"kind", std::string("CALL")},
              {"role", std::string(recipient_name(d->to_role))},
              {"to", d->to.digits}});
    }
    return;
  }
  if (const auto* st = std::get_if<start_timer>(&a)) {
    const int idx = st->kind == timer_kind::resend ? 0 : 1;
    armed_[idx] = {true, ++timer_generation_};
    // A link stall can push the clock past the intended firing time; the
    // timer then fires as soon as the loop resumes.
    queue_.schedule(std::max(st->fire_at, clock_.now),
                    queued_event{queued_event::kind::timer,
                                 {},
                                 timer_entry{st->kind, timer_generation_},
                                 {}});
    return;
  }
  if (const auto* ct = std::get_if<cancel_timer>(&a)) {
    armed_[ct->kind == timer_kind::resend ? 0 : 1].active = false;
    return;
  }

  const bool contactor_before = plant_.contactor_energized;
  plant_ = apply_action(plant_, a);
  if (plant_.contactor_energized != contactor_before) record_power_if_changed();
  if (plant_.loads_powered() && !plant_.contactor_energized)
    throw invariant_violation("plant: loads powered with contactor open");
}

std::vector<transcript_record> engine::run() {
  validate_scenario(scenario_);

  record(record_kind::state_change,
         {{"phase", std::string(phase_name(controller_.current))}});
  for (const scenario_event& ev : scenario_.events)
    queue_.schedule(ev.at, queued_event{queued_event::kind::scripted, ev, {}, {}});

  while (!queue_.empty()) {
    if (queue_.top().at > scenario_.horizon) break;
    const auto entry = queue_.pop();
    clock_.now = std::max(clock_.now, entry.at);

    switch (entry.value.k) {
      case queued_event::kind::scripted:
        handle_scripted(entry.value.scripted);
        break;
      case queued_event::kind::timer: {
        const timer_entry t = entry.value.timer;
        armed_timer& slot = armed_[t.kind == timer_kind::resend ? 0 : 1];
        if (!slot.active || slot.generation != t.generation) break;  // stale
        slot.active = false;
        if (plant_.controller_powered())
          deliver(input_event::timer_fired(t.kind, clock_.now));
        break;
      }
      case queued_event::kind::confirm: {
        if (entry.value.confirm.generation != edge_generation_) break;
        if (plant_.sensor_output == delivered_) break;
        if (!plant_.controller_powered()) break;  // dead sensor rail
        delivered_ = plant_.sensor_output;
        record(record_kind::sensor_edge,
               {{"input", channel_name(cfg_.smoke_channel())},
                {"level_pm",
                 static_cast<std::int64_t>(std::llround(plant_.smoke_level * 1000.0))},
                {"output", std::string(sensor_level_name(delivered_))}});
        deliver(delivered_ == sensor_level::high
                    ? input_event::smoke_high(clock_.now)
                    : input_event::smoke_low(clock_.now));
        break;
      }
    }

    if (plant_.emergency_light_on() && !plant_.controller_powered())
      throw invariant_violation("plant: emergency light burning unpowered");
  }

  if (sms_delivered_ + sms_failed_ != sms_actions_)
    throw invariant_violation("conservation: SMS outcomes != SendSms actions");
  if (calls_placed_ + calls_failed_ != dial_actions_)
    throw invariant_violation("conservation: call outcomes != Dial actions");

  return std::move(records_);
}

std::vector<transcript_record> run_scenario(const config& cfg,
                                            const scenario& s, byte_link& link,
                                            virtual_clock& clock) {
  engine e(cfg, s, link, clock);
  return e.run();
}

std::vector<transcript_record> run_scenario(const config& cfg,
                                            const scenario& s) {
  return run_scenario_with_log(cfg, s).transcript;
}

sim_run run_scenario_with_log(const config& cfg, const scenario& s) {
  virtual_clock clock;
  modem_session modem;
  inproc_link link(modem, clock);
  engine e(cfg, s, link, clock);
  sim_run out;
  out.transcript = e.run();
  out.modem_log = modem.log();
  return out;
}

}  // namespace firesafe
