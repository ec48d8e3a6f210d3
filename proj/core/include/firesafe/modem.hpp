// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "firesafe/at.hpp"
#include "firesafe/config.hpp"

namespace firesafe {

enum class fault_behavior { reply_error, cms_error, drop };
const char* fault_behavior_name(fault_behavior b);

/// What a fault entry can latch onto: a command kind, or the SMS body frame.
enum class fault_match { attention, echo, text_mode, sms_header, body, dial, hangup };
const char* fault_match_name(fault_match m);

/// Parses the wire names "AT", "ATE", "CMGF", "CMGS", "BODY", "ATD", "ATH".
std::optional<fault_match> fault_match_from_name(std::string_view name);
std::optional<fault_behavior> fault_behavior_from_name(std::string_view name);

struct fault_spec {
  fault_match match = fault_match::sms_header;
  fault_behavior behavior = fault_behavior::reply_error;
  int code = 500;  // cms_error only

  bool operator==(const fault_spec&) const = default;
};

enum class session_kind { idle, awaiting_sms_body, in_call };
const char* session_kind_name(session_kind s);

struct network_log_entry {
  enum class entry_kind { sms, call };
  entry_kind kind = entry_kind::sms;
  phone_number to;
  std::string body;  // empty for calls
  std::int64_t at = 0;
  int message_ref = 0;  // SMS only

  bool operator==(const network_log_entry&) const = default;
};

/// One log entry as a canonical JSON line (keys sorted, no whitespace).
std::string log_entry_to_json(const network_log_entry& e);

struct modem_state {
  bool echo = false;  // our emulation defaults echo off
  bool text_mode = false;
  session_kind session = session_kind::idle;
  phone_number sms_to{};   // valid while awaiting_sms_body
  phone_number call_to{};  // valid while in_call
  int next_message_ref = 0;

  struct fault_entry {
    fault_spec spec;
    bool used = false;
    bool operator==(const fault_entry&) const = default;
  };
  std::vector<fault_entry> fault_plan;  // matched in declaration order

  bool operator==(const modem_state&) const = default;
};

struct modem_step_result {
  modem_state state;
  std::string response;  // empty on a dropped frame
  std::optional<network_log_entry> log;
};

/// Processes exactly one frame: a CR-terminated command line when idle or
/// in-call, the SUB-terminated body frame while awaiting_sms_body. Unknown
/// commands answer ERROR; fault-plan entries override the reply and leave
/// the session untouched.
modem_step_result modem_step(modem_state m, std::string_view frame,
                             std::int64_t at);

/// Byte-stream wrapper around modem_step: owns the receive buffer, splits
/// frames, tracks virtual time, and collects the network log. Control lines
/// starting with '#' ("#t=<ms>", "#fault=<match>:<behavior>:<code>:<count>")
/// adjust the session without producing a reply.
class modem_session {
 public:
  struct frame_output {
    std::string bytes;    // reply for this frame (may be empty)
    bool dropped = false; // a fault swallowed the reply
  };

  void set_time(std::int64_t at) { now_ = at; }
  std::int64_t time() const { return now_; }

  void add_fault(const fault_spec& f, int count = 1);

  /// Feeds raw bytes; returns one frame_output per complete frame consumed.
  std::vector<frame_output> feed(std::string_view bytes);

  const std::vector<network_log_entry>& log() const { return log_; }
  const modem_state& state() const { return state_; }

  /// Invoked once per new log entry, after it is appended.
  void on_log(std::function<void(const network_log_entry&)> cb) {
    on_log_ = std::move(cb);
  }

 private:
  void handle_control_line(std::string_view line);

  modem_state state_;
  std::string rx_;
  std::int64_t now_ = 0;
  std::vector<network_log_entry> log_;
  std::function<void(const network_log_entry&)> on_log_;
};

}  // namespace firesafe
