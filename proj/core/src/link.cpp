// SPDX-License-Identifier: Apache-2.0
#include "firesafe/link.hpp"

#include <utility>

namespace firesafe {

void inproc_link::send(std::string_view bytes) {
  modem_.set_time(clock_.now);
  for (auto& out : modem_.feed(bytes)) {
    if (!out.dropped) rx_.append(out.bytes);
  }
}

std::optional<std::string> inproc_link::receive(std::int64_t budget_ms) {
  if (rx_.empty()) {
    clock_.advance(budget_ms);
    return std::nullopt;
  }
  return std::exchange(rx_, std::string());
}

at_session::unit_result at_session::expect_unit() {
  for (;;) {
    const parse_result pr = parse_response(rx_);
    if (pr.st == parse_result::status::response) {
      rx_.erase(0, pr.consumed);
      return {unit_status::got, pr.resp};
    }
    if (pr.st == parse_result::status::malformed) {
      rx_.clear();  // resynchronize after garbage
      return {unit_status::malformed, {}};
    }
    auto bytes = link_.receive(unit_timeout_);
    if (!bytes) return {unit_status::timeout, {}};
    rx_.append(*bytes);
  }
}

sms_outcome send_sms_with_retry(at_session& session, const phone_number& to,
                                std::string_view body, const config& cfg) {
  const std::vector<std::string> frames = encode_sms(to, body);
  sms_outcome outcome;

  for (int attempt = 1; attempt <= cfg.sms_retry_limit; ++attempt) {
    if (attempt > 1) session.link().wait(cfg.sms_retry_backoff);
    outcome.attempts = attempt;

    auto exchange = [&](const std::string& frame,
                        response_kind expected) -> bool {
      session.send_frame(frame);
      const auto r = session.expect_unit();
      outcome.last_status = r.st;
      if (r.st == at_session::unit_status::got) outcome.last_response = r.resp;
      return r.st == at_session::unit_status::got && r.resp.kind == expected;
    };

    if (!exchange(frames[0], response_kind::ok)) continue;
    if (!exchange(frames[1], response_kind::prompt)) continue;

    session.send_frame(frames[2]);
    const auto ack = session.expect_unit();
    outcome.last_status = ack.st;
    if (ack.st == at_session::unit_status::got)
      outcome.last_response = ack.resp;
    if (ack.st != at_session::unit_status::got ||
        ack.resp.kind != response_kind::cmgs_ack)
      continue;

    // The ack means the modem accepted and logged the message; the trailing
    // OK is consumed but cannot un-send it.
    session.expect_unit();
    outcome.sent = true;
    outcome.message_ref = ack.resp.message_ref;
    return outcome;
  }
  return outcome;
}

call_outcome place_call(at_session& session, const phone_number& to) {
  session.send_frame(encode_dial(to));
  const auto r = session.expect_unit();
  if (r.st != at_session::unit_status::got || r.resp.kind != response_kind::ok)
    return {false};
  // Free the line for the next alert; the call itself is already logged.
  session.send_frame(std::string("ATH") + kCr);
  session.expect_unit();
  return {true};
}

}  // namespace firesafe
