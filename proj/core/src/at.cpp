// SPDX-License-Identifier: Apache-2.0
#include "firesafe/at.hpp"

#include <algorithm>
#include <cctype>

namespace firesafe {

namespace {

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isdigit(c) != 0;
  });
}

// "+<8..15 digits>", already normalized on the encode side; the modem side
// re-checks incoming headers with the same rule.
bool is_wire_phone(std::string_view s) {
  if (s.size() < 9 || s.size() > 16 || s[0] != '+') return false;
  return all_digits(s.substr(1));
}

// Parses a bounded decimal integer; returns -1 on any violation.
int parse_int(std::string_view s, int max_value) {
  if (!all_digits(s) || s.size() > 4) return -1;
  int v = 0;
  for (char c : s) v = v * 10 + (c - '0');
  return v <= max_value ? v : -1;
}

}  // namespace

bool is_sms_body_char(unsigned char c) { return c >= 0x20 && c <= 0x7e; }

std::vector<std::string> encode_sms(const phone_number& to,
                                    std::string_view body) {
  if (body.size() > kMaxSmsBodyChars)
    throw body_too_long("SMS body exceeds 160 characters");
  for (std::size_t i = 0; i < body.size(); ++i) {
    if (!is_sms_body_char(static_cast<unsigned char>(body[i])))
      throw illegal_character(i, "SMS body byte outside the 7-bit-safe subset");
  }
  std::vector<std::string> frames;
  frames.emplace_back(std::string("AT+CMGF=1") + kCr);
  frames.emplace_back("AT+CMGS=\"" + to.digits + "\"" + kCr);
  frames.emplace_back(std::string(body) + kSub);
  return frames;
}

std::string encode_dial(const phone_number& to) {
  return "ATD" + to.digits + ";" + kCr;
}

const char* response_kind_name(response_kind k) {
  switch (k) {
    case response_kind::ok: return "OK";
    case response_kind::error: return "ERROR";
    case response_kind::cms_error: return "CMS_ERROR";
    case response_kind::prompt: return "PROMPT";
    case response_kind::cmgs_ack: return "CMGS_ACK";
    case response_kind::ring: return "RING";
    case response_kind::no_carrier: return "NO_CARRIER";
  }
  return "ERROR";
}

parse_result parse_response(std::string_view bytes) {
  parse_result r;
  if (bytes.empty()) return r;

  // The prompt is the one unframed unit: bare "> ", optionally preceded by
  // CRLF when the modem emits it mid-stream.
  std::size_t pos = 0;
  if (bytes[0] == '>') {
    if (bytes.size() < 2) return r;  // need_more: could become "> "
    if (bytes[1] == ' ') {
      r.st = parse_result::status::response;
      r.resp = {response_kind::prompt, 0, 0};
      r.consumed = 2;
      return r;
    }
    r.st = parse_result::status::malformed;
    r.malformed_offset = 0;
    return r;
  }

  if (bytes[0] != kCr) {
    r.st = parse_result::status::malformed;
    r.malformed_offset = 0;
    return r;
  }
  if (bytes.size() < 2) return r;
  if (bytes[1] != kLf) {
    r.st = parse_result::status::malformed;
    r.malformed_offset = 1;
    return r;
  }
  pos = 2;

  if (pos >= bytes.size()) return r;
  if (bytes[pos] == '>') {
    if (bytes.size() < pos + 2) return r;
    if (bytes[pos + 1] == ' ') {
      r.st = parse_result::status::response;
      r.resp = {response_kind::prompt, 0, 0};
      r.consumed = pos + 2;
      return r;
    }
    r.st = parse_result::status::malformed;
    r.malformed_offset = pos;
    return r;
  }

  const std::size_t end = bytes.find("\r\n", pos);
  if (end == std::string_view::npos) {
    // No terminator yet; an overlong payload can never complete.
    if (bytes.size() - pos > 64) {
      r.st = parse_result::status::malformed;
      r.malformed_offset = pos;
    }
    return r;
  }
  const std::string_view payload = bytes.substr(pos, end - pos);
  const std::size_t consumed = end + 2;

  auto ok = [&](at_response resp) {
    r.st = parse_result::status::response;
    r.resp = resp;
    r.consumed = consumed;
    return r;
  };

  if (payload == "OK") return ok({response_kind::ok, 0, 0});
  if (payload == "ERROR") return ok({response_kind::error, 0, 0});
  if (payload == "RING") return ok({response_kind::ring, 0, 0});
  if (payload == "NO CARRIER") return ok({response_kind::no_carrier, 0, 0});
  if (payload.starts_with("+CMS ERROR: ")) {
    const int code = parse_int(payload.substr(12), 999);
    if (code >= 0) return ok({response_kind::cms_error, code, 0});
  } else if (payload.starts_with("+CMGS: ")) {
    const int ref = parse_int(payload.substr(7), 255);
    if (ref >= 0) return ok({response_kind::cmgs_ack, 0, ref});
  }
  r.st = parse_result::status::malformed;
  r.malformed_offset = pos;
  return r;
}

parsed_command parse_command_line(std::string_view line) {
  parsed_command cmd;
  if (line.find(kLf) != std::string_view::npos) return cmd;  // bare LF: invalid
  if (line.size() + 1 > kMaxCommandBytes) return cmd;

  if (line == "AT") {
    cmd.kind = command_kind::attention;
  } else if (line == "ATE0" || line == "ATE1") {
    cmd.kind = command_kind::echo;
    cmd.echo_on = line.back() == '1';
  } else if (line == "AT+CMGF=1") {
    cmd.kind = command_kind::text_mode;
  } else if (line == "ATH") {
    cmd.kind = command_kind::hangup;
  } else if (line.starts_with("AT+CMGS=\"") && line.ends_with("\"")) {
    const std::string_view num = line.substr(9, line.size() - 10);
    if (is_wire_phone(num)) {
      cmd.kind = command_kind::sms_header;
      cmd.number = phone_number{std::string(num)};
    }
  } else if (line.starts_with("ATD") && line.ends_with(";")) {
    const std::string_view num = line.substr(3, line.size() - 4);
    if (is_wire_phone(num)) {
      cmd.kind = command_kind::dial_number;
      cmd.number = phone_number{std::string(num)};
    }
  }
  return cmd;
}

}  // namespace firesafe
