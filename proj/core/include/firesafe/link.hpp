// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "firesafe/at.hpp"
#include "firesafe/config.hpp"
#include "firesafe/modem.hpp"

namespace firesafe {

/// The run's virtual clock, in milliseconds. Never moves backward.
struct virtual_clock {
  std::int64_t now = 0;
  void advance(std::int64_t ms) { now += ms; }
};

/// Point-to-point ordered byte stream between the controller side and one
/// modem. Exactly one outstanding command at a time; the caller owns
/// sequencing.
class byte_link {
 public:
  virtual ~byte_link() = default;

  /// Writes one frame. Throws link_error on a dead link.
  virtual void send(std::string_view bytes) = 0;

  /// Returns whatever response bytes are available. When none arrive within
  /// `budget_ms` of virtual time, advances the virtual clock by the budget
  /// and returns nullopt.
  virtual std::optional<std::string> receive(std::int64_t budget_ms) = 0;

  /// Advances virtual time without touching the wire (retry backoff).
  virtual void wait(std::int64_t ms) = 0;

  /// Adds `count` copies of a fault entry to the peer modem's plan.
  virtual void inject_fault(const fault_spec& f, int count) = 0;

  virtual std::int64_t now() const = 0;
};

/// Link to an in-process modem_session. Replies arrive with zero virtual
/// latency; a dropped frame leaves the receive buffer empty, so the next
/// receive() burns its whole budget.
class inproc_link : public byte_link {
 public:
  inproc_link(modem_session& modem, virtual_clock& clock)
      : modem_(modem), clock_(clock) {}

  void send(std::string_view bytes) override;
  std::optional<std::string> receive(std::int64_t budget_ms) override;
  void wait(std::int64_t ms) override { clock_.advance(ms); }
  void inject_fault(const fault_spec& f, int count) override {
    modem_.add_fault(f, count);
  }
  std::int64_t now() const override { return clock_.now; }

 private:
  modem_session& modem_;
  virtual_clock& clock_;
  std::string rx_;
};

/// Drives AT exchanges over a byte_link: frames out, response units in.
/// Each expected unit gets its own timeout budget (5000 ms unless changed).
class at_session {
 public:
  explicit at_session(byte_link& link) : link_(link) {}

  enum class unit_status { got, timeout, malformed };
  struct unit_result {
    unit_status st = unit_status::timeout;
    at_response resp{};
  };

  void send_frame(std::string_view frame) { link_.send(frame); }

  /// Blocks (virtually) until one complete response unit arrives or the
  /// budget elapses.
  unit_result expect_unit();

  void set_unit_timeout(std::int64_t ms) { unit_timeout_ = ms; }
  std::int64_t unit_timeout() const { return unit_timeout_; }
  byte_link& link() { return link_; }

 private:
  byte_link& link_;
  std::string rx_;
  std::int64_t unit_timeout_ = kDefaultUnitTimeoutMs;
};

struct sms_outcome {
  bool sent = false;
  int attempts = 0;
  int message_ref = 0;             // valid when sent
  at_session::unit_status last_status = at_session::unit_status::timeout;
  at_response last_response{};     // valid when last_status == got
};

/// Runs the text-mode SMS exchange with retries: each attempt replays the
/// full encode_sms frame sequence; failed attempts wait sms_retry_backoff
/// before the next, up to sms_retry_limit total attempts. SMS never
/// interleave: the exchange owns the link until it returns.
sms_outcome send_sms_with_retry(at_session& session, const phone_number& to,
                                std::string_view body, const config& cfg);

struct call_outcome {
  bool placed = false;
};

/// Places one voice-call alert: ATD...; then ATH once the modem accepts.
/// No retry policy applies to calls.
call_outcome place_call(at_session& session, const phone_number& to);

}  // namespace firesafe
