// SPDX-License-Identifier: Apache-2.0
#include "firesafe/modem.hpp"

#include <algorithm>
#include <charconv>

#include <json.hpp>

namespace firesafe {

namespace {

const std::string kOk = "\r\nOK\r\n";
const std::string kError = "\r\nERROR\r\n";
const std::string kPrompt = "\r\n> ";

std::string cms_error_line(int code) {
  return "\r\n+CMS ERROR: " + std::to_string(code) + "\r\n";
}

fault_match match_kind_of(const parsed_command& cmd) {
  switch (cmd.kind) {
    case command_kind::attention: return fault_match::attention;
    case command_kind::echo: return fault_match::echo;
    case command_kind::text_mode: return fault_match::text_mode;
    case command_kind::sms_header: return fault_match::sms_header;
    case command_kind::dial_number: return fault_match::dial;
    case command_kind::hangup: return fault_match::hangup;
    case command_kind::unknown: break;
  }
  return fault_match::attention;  // unknown commands never match faults
}

// First unused fault entry matching this frame kind, consumed in
// declaration order.
std::optional<fault_spec> take_fault(modem_state& m, fault_match kind) {
  for (auto& entry : m.fault_plan) {
    if (!entry.used && entry.spec.match == kind) {
      entry.used = true;
      return entry.spec;
    }
  }
  return std::nullopt;
}

std::string fault_reply(const fault_spec& f) {
  switch (f.behavior) {
    case fault_behavior::reply_error: return kError;
    case fault_behavior::cms_error: return cms_error_line(f.code);
    case fault_behavior::drop: return "";
  }
  return kError;
}

bool valid_sms_body(std::string_view body) {
  if (body.size() > kMaxSmsBodyChars) return false;
  return std::all_of(body.begin(), body.end(), [](char c) {
    return is_sms_body_char(static_cast<unsigned char>(c));
  });
}

std::optional<std::int64_t> parse_i64(std::string_view s) {
  std::int64_t v = 0;
  const auto* first = s.data();
  const auto* last = s.data() + s.size();
  auto [p, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || p != last) return std::nullopt;
  return v;
}

}  // namespace

const char* fault_behavior_name(fault_behavior b) {
  switch (b) {
    case fault_behavior::reply_error: return "reply_error";
    case fault_behavior::cms_error: return "cms_error";
    case fault_behavior::drop: return "drop";
  }
  return "reply_error";
}

const char* fault_match_name(fault_match m) {
  switch (m) {
    case fault_match::attention: return "AT";
    case fault_match::echo: return "ATE";
    case fault_match::text_mode: return "CMGF";
    case fault_match::sms_header: return "CMGS";
    case fault_match::body: return "BODY";
    case fault_match::dial: return "ATD";
    case fault_match::hangup: return "ATH";
  }
  return "CMGS";
}

std::optional<fault_match> fault_match_from_name(std::string_view name) {
  if (name == "AT") return fault_match::attention;
  if (name == "ATE") return fault_match::echo;
  if (name == "CMGF") return fault_match::text_mode;
  if (name == "CMGS") return fault_match::sms_header;
  if (name == "BODY") return fault_match::body;
  if (name == "ATD") return fault_match::dial;
  if (name == "ATH") return fault_match::hangup;
  return std::nullopt;
}

std::optional<fault_behavior> fault_behavior_from_name(std::string_view name) {
  if (name == "reply_error") return fault_behavior::reply_error;
  if (name == "cms_error") return fault_behavior::cms_error;
  if (name == "drop") return fault_behavior::drop;
  return std::nullopt;
}

const char* session_kind_name(session_kind s) {
  switch (s) {
    case session_kind::idle: return "IDLE";
    case session_kind::awaiting_sms_body: return "AWAITING_SMS_BODY";
    case session_kind::in_call: return "IN_CALL";
  }
  return "IDLE";
}

std::string log_entry_to_json(const network_log_entry& e) {
  nlohmann::json j;
  j["at"] = e.at;
  j["body"] = e.body;
  j["kind"] = e.kind == network_log_entry::entry_kind::sms ? "SMS" : "CALL";
  if (e.kind == network_log_entry::entry_kind::sms) j["ref"] = e.message_ref;
  j["to"] = e.to.digits;
  return j.dump();
}

modem_step_result modem_step(modem_state m, std::string_view frame,
                             std::int64_t at) {
  modem_step_result result;
  std::string echo_bytes =
      m.echo ? std::string(frame) : std::string();

  if (m.session == session_kind::awaiting_sms_body) {
    std::string_view body = frame;
    if (!body.empty() && body.back() == kSub) body.remove_suffix(1);
    m.session = session_kind::idle;
    if (auto f = take_fault(m, fault_match::body)) {
      result.state = std::move(m);
      result.response = echo_bytes + fault_reply(*f);
      return result;
    }
    if (!valid_sms_body(body)) {
      result.state = std::move(m);
      result.response = echo_bytes + cms_error_line(305);
      return result;
    }
    const int ref = m.next_message_ref;
    m.next_message_ref = (m.next_message_ref + 1) % 256;
    result.log = network_log_entry{network_log_entry::entry_kind::sms, m.sms_to,
                                   std::string(body), at, ref};
    result.state = std::move(m);
    result.response =
        echo_bytes + "\r\n+CMGS: " + std::to_string(ref) + "\r\n" + kOk;
    return result;
  }

  std::string_view line = frame;
  if (!line.empty() && line.back() == kCr) line.remove_suffix(1);
  const parsed_command cmd = parse_command_line(line);

  if (cmd.kind != command_kind::unknown) {
    if (auto f = take_fault(m, match_kind_of(cmd))) {
      result.state = std::move(m);
      result.response = echo_bytes + fault_reply(*f);
      return result;
    }
  }

  switch (cmd.kind) {
    case command_kind::attention:
      result.response = kOk;
      break;
    case command_kind::echo:
      m.echo = cmd.echo_on;
      result.response = kOk;
      break;
    case command_kind::text_mode:
      m.text_mode = true;
      result.response = kOk;
      break;
    case command_kind::sms_header:
      if (m.session != session_kind::idle) {
        result.response = kError;
        break;
      }
      m.session = session_kind::awaiting_sms_body;
      m.sms_to = cmd.number;
      result.response = kPrompt;
      break;
    case command_kind::dial_number:
      if (m.session != session_kind::idle) {
        result.response = kError;  // line busy
        break;
      }
      m.session = session_kind::in_call;
      m.call_to = cmd.number;
      result.log = network_log_entry{network_log_entry::entry_kind::call,
                                     cmd.number, "", at, 0};
      result.response = kOk;
      break;
    case command_kind::hangup:
      m.session = session_kind::idle;
      result.response = kOk;
      break;
    case command_kind::unknown:
      result.response = kError;
      break;
  }
  result.response = echo_bytes + result.response;
  result.state = std::move(m);
  return result;
}

void modem_session::add_fault(const fault_spec& f, int count) {
  for (int i = 0; i < count; ++i)
    state_.fault_plan.push_back({f, false});
}

void modem_session::handle_control_line(std::string_view line) {
  if (line.starts_with("#t=")) {
    if (auto t = parse_i64(line.substr(3))) now_ = *t;
    return;
  }
  if (line.starts_with("#fault=")) {
    // #fault=<match>:<behavior>:<code>:<count>
    std::string_view rest = line.substr(7);
    std::vector<std::string_view> parts;
    while (!rest.empty()) {
      const std::size_t colon = rest.find(':');
      parts.push_back(rest.substr(0, colon));
      if (colon == std::string_view::npos) break;
      rest.remove_prefix(colon + 1);
    }
    if (parts.size() != 4) return;
    const auto match = fault_match_from_name(parts[0]);
    const auto behavior = fault_behavior_from_name(parts[1]);
    const auto code = parse_i64(parts[2]);
    const auto count = parse_i64(parts[3]);
    if (!match || !behavior || !code || !count || *count < 1) return;
    add_fault({*match, *behavior, static_cast<int>(*code)},
              static_cast<int>(*count));
    return;
  }
  // Unknown control lines are ignored.
}

std::vector<modem_session::frame_output> modem_session::feed(
    std::string_view bytes) {
  rx_.append(bytes);
  std::vector<frame_output> outputs;

  for (;;) {
    if (state_.session == session_kind::awaiting_sms_body) {
      // Stray LF from a CRLF-terminated CMGS line; never legal body content.
      while (!rx_.empty() && rx_.front() == kLf) rx_.erase(0, 1);
      const std::size_t sub = rx_.find(kSub);
      if (sub == std::string::npos) {
        // Bound the body buffer; oversize input is rejected as a bad body.
        if (rx_.size() > 4096) {
          rx_.clear();
          state_.session = session_kind::idle;
          outputs.push_back({cms_error_line(305), false});
        }
        break;
      }
      const std::string frame = rx_.substr(0, sub + 1);
      rx_.erase(0, sub + 1);
      auto r = modem_step(state_, frame, now_);
      state_ = std::move(r.state);
      if (r.log) {
        log_.push_back(*r.log);
        if (on_log_) on_log_(log_.back());
      }
      outputs.push_back({std::move(r.response), false});
      if (outputs.back().bytes.empty()) outputs.back().dropped = true;
      continue;
    }

    const std::size_t cr = rx_.find(kCr);
    if (cr == std::string::npos) {
      if (rx_.size() > kMaxCommandBytes) {
        rx_.clear();
        outputs.push_back({kError, false});
      }
      break;
    }
    std::string line = rx_.substr(0, cr);
    rx_.erase(0, cr + 1);
    // Tolerate CRLF-terminated input: the LF of the previous line leads the
    // next one.
    while (!line.empty() && line.front() == kLf) line.erase(line.begin());
    if (line.empty()) continue;
    if (line.front() == '#') {
      handle_control_line(line);
      continue;
    }
    auto r = modem_step(state_, line + kCr, now_);
    state_ = std::move(r.state);
    if (r.log) {
      log_.push_back(*r.log);
      if (on_log_) on_log_(log_.back());
    }
    const bool dropped = r.response.empty();
    outputs.push_back({std::move(r.response), dropped});
  }
  return outputs;
}

}  // namespace firesafe
