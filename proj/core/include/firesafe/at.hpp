// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "firesafe/config.hpp"

namespace firesafe {

// Wire constants. Commands are ASCII lines terminated by CR; an SMS body
// frame is the body bytes terminated by SUB (0x1A). Responses are
// CRLF-framed except the bare two-byte prompt "> ".
inline constexpr char kCr = '\r';
inline constexpr char kLf = '\n';
inline constexpr char kSub = '\x1a';
inline constexpr std::size_t kMaxCommandBytes = 356;  // including the CR
inline constexpr std::size_t kMaxSmsBodyChars = 160;
inline constexpr std::int64_t kDefaultUnitTimeoutMs = 5000;

/// 7-bit-safe SMS alphabet: printable ASCII (0x20..0x7E). SUB is excluded
/// by construction.
bool is_sms_body_char(unsigned char c);

/// The exact frames of one text-mode SMS dispatch:
///   "AT+CMGF=1\r", "AT+CMGS=\"<to>\"\r", "<body>\x1A".
/// Throws body_too_long, illegal_character.
std::vector<std::string> encode_sms(const phone_number& to,
                                    std::string_view body);

/// Voice-call dial command: "ATD<to>;\r".
std::string encode_dial(const phone_number& to);

enum class response_kind { ok, error, cms_error, prompt, cmgs_ack, ring, no_carrier };
const char* response_kind_name(response_kind k);

struct at_response {
  response_kind kind = response_kind::ok;
  int code = 0;         // cms_error only, in [0, 999]
  int message_ref = 0;  // cmgs_ack only, in [0, 255]

  bool operator==(const at_response&) const = default;
};

/// Result of scanning a byte buffer for the next complete response unit.
struct parse_result {
  enum class status { response, need_more, malformed };
  status st = status::need_more;
  at_response resp{};
  std::size_t consumed = 0;         // bytes to drop from the front on success
  std::size_t malformed_offset = 0; // where the garbage starts

  bool is_response() const { return st == status::response; }
};

/// Longest-match parse of one response unit from the front of `bytes`.
/// Returns need_more when no complete unit is present yet; never throws on
/// arbitrary input.
parse_result parse_response(std::string_view bytes);

// Modem-side command grammar.
enum class command_kind {
  attention,   // AT
  echo,        // ATE0 / ATE1
  text_mode,   // AT+CMGF=1
  sms_header,  // AT+CMGS="<phone>"
  dial_number, // ATD<phone>;
  hangup,      // ATH
  unknown
};

struct parsed_command {
  command_kind kind = command_kind::unknown;
  bool echo_on = false;   // echo only
  phone_number number{};  // sms_header and dial_number only
};

/// Classifies one command line (without the trailing CR). Anything outside
/// the grammar, including lines with embedded bare LF, comes back `unknown`.
parsed_command parse_command_line(std::string_view line);

}  // namespace firesafe
