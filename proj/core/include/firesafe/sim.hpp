// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <queue>
#include <string>
#include <string_view>
#include <vector>

#include "firesafe/config.hpp"
#include "firesafe/controller.hpp"
#include "firesafe/link.hpp"
#include "firesafe/modem.hpp"
#include "firesafe/plant.hpp"
#include "firesafe/transcript.hpp"

namespace firesafe {

/// One scripted input to a run.
struct scenario_event {
  enum class kind {
    set_smoke,
    press_reset,
    press_restore,
    mains_fail,
    mains_restore,
    modem_fault,
    backup_fail
  };

  std::int64_t at = 0;
  kind k = kind::set_smoke;
  double level = 0.0;       // set_smoke
  fault_spec fault{};       // modem_fault
  int fault_count = 1;      // modem_fault

  bool operator==(const scenario_event&) const = default;
};

const char* scenario_event_kind_name(scenario_event::kind k);

struct scenario {
  std::string name;
  std::vector<scenario_event> events;  // sorted by (at, declaration order)
  std::int64_t horizon = 0;

  bool operator==(const scenario&) const = default;
};

/// Parses the scenario document {name, horizon_ms, events:[...]}. Events are
/// stable-sorted by time. Throws scenario_error.
scenario parse_scenario(std::string_view text);

/// Re-checks scenario invariants (times >= 0, levels in [0,1], horizon >=
/// last event). Throws scenario_error.
void validate_scenario(const scenario& s);

/// Deterministic event queue: pops in (at, insertion seq) order; insertion
/// order breaks ties. Scheduling before the referenced clock throws
/// scheduling_in_past.
template <class T>
class event_queue {
 public:
  explicit event_queue(const virtual_clock& clock) : clock_(clock) {}

  struct entry {
    std::int64_t at;
    std::int64_t seq;
    T value;
  };

  void schedule(std::int64_t at, T value) {
    if (at < clock_.now)
      throw scheduling_in_past("schedule at " + std::to_string(at) +
                               " ms before clock " +
                               std::to_string(clock_.now) + " ms");
    heap_.push(entry{at, next_seq_++, std::move(value)});
  }

  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }
  const entry& top() const { return heap_.top(); }

  entry pop() {
    entry e = heap_.top();
    heap_.pop();
    return e;
  }

 private:
  struct later {
    bool operator()(const entry& a, const entry& b) const {
      if (a.at != b.at) return a.at > b.at;
      return a.seq > b.seq;
    }
  };

  const virtual_clock& clock_;
  std::priority_queue<entry, std::vector<entry>, later> heap_;
  std::int64_t next_seq_ = 0;
};

/// Wires controller, plant and GSM link together and executes one scenario
/// under the virtual clock. Strictly single-threaded; independent engine
/// instances may run in parallel.
class engine {
 public:
  engine(const config& cfg, const scenario& s, byte_link& link,
         virtual_clock& clock);

  /// Processes scripted events and controller timers in (time, seq) order
  /// and returns the full transcript. Throws scenario_error or
  /// invariant_violation.
  std::vector<transcript_record> run();

 private:
  struct timer_entry {
    timer_kind kind;
    std::int64_t generation;
  };
  struct sensor_confirm {
    std::int64_t generation;
  };
  struct queued_event {
    enum class kind { scripted, timer, confirm } k;
    scenario_event scripted{};
    timer_entry timer{};
    sensor_confirm confirm{};
  };

  void record(record_kind kind, payload_map payload);
  void record_power_if_changed();
  void handle_scripted(const scenario_event& ev);
  void handle_set_smoke(double level);
  void deliver(const input_event& ev);
  void execute(const action& a);
  void reboot_controller();

  const config& cfg_;
  const scenario& scenario_;
  byte_link& link_;
  virtual_clock& clock_;
  at_session session_;
  event_queue<queued_event> queue_;

  controller_state controller_{};
  plant_state plant_{};
  sensor_level delivered_ = sensor_level::low;  // last edge the IC saw
  std::int64_t edge_generation_ = 0;

  struct armed_timer {
    bool active = false;
    std::int64_t generation = 0;
  };
  armed_timer armed_[2] = {};
  std::int64_t timer_generation_ = 0;

  bool controller_was_powered_ = true;

  std::vector<transcript_record> records_;
  std::int64_t next_seq_ = 0;

  struct power_snapshot {
    bool mains, backup, contactor, loads, controller;
    bool operator==(const power_snapshot&) const = default;
  };
  power_snapshot last_power_{};

  // Conservation counters, checked at end of run.
  std::int64_t sms_actions_ = 0, sms_delivered_ = 0, sms_failed_ = 0;
  std::int64_t dial_actions_ = 0, calls_placed_ = 0, calls_failed_ = 0;
};

/// Runs a scenario against an in-process modem with zero link latency.
std::vector<transcript_record> run_scenario(const config& cfg,
                                            const scenario& s);

/// Same, but over a caller-provided link (e.g. TCP to a remote modem).
std::vector<transcript_record> run_scenario(const config& cfg,
                                            const scenario& s, byte_link& link,
                                            virtual_clock& clock);

/// In-process run that also exposes the modem's network log.
struct sim_run {
  std::vector<transcript_record> transcript;
  std::vector<network_log_entry> modem_log;
};
sim_run run_scenario_with_log(const config& cfg, const scenario& s);

}  // namespace firesafe
