// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <atomic>
#include <cstdint>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "firesafe/link.hpp"
#include "firesafe/modem.hpp"

namespace firesafe {

/// Controller-side link to a remote modem session over TCP. Virtual time is
/// carried in-band: a "#t=<ms>" comment line precedes any frame sent at a
/// new virtual timestamp, so the remote log carries the run's timestamps. A
/// remote drop fault comes back as a "#drop" comment and is treated exactly
/// like a local receive timeout.
class tcp_link : public byte_link {
 public:
  /// Connects immediately. Throws link_error when nothing is listening.
  tcp_link(const std::string& host, int port, virtual_clock& clock,
           int real_timeout_ms = 5000);
  ~tcp_link() override;

  tcp_link(const tcp_link&) = delete;
  tcp_link& operator=(const tcp_link&) = delete;

  void send(std::string_view bytes) override;
  std::optional<std::string> receive(std::int64_t budget_ms) override;
  void wait(std::int64_t ms) override { clock_.advance(ms); }
  void inject_fault(const fault_spec& f, int count) override;
  std::int64_t now() const override { return clock_.now; }

 private:
  void announce_time();
  void write_all(std::string_view bytes);

  int fd_ = -1;
  virtual_clock& clock_;
  std::int64_t announced_ = -1;
  int real_timeout_ms_;
  std::string raw_;  // inbound bytes pending control-line stripping
};

/// Serial-accept TCP server exposing one emulated modem session per
/// connection. Received "#t="/"#fault=" comment lines adjust the session; a
/// drop fault answers with a "#drop" comment so the peer need not rely on
/// wall-clock timeouts. Log entries are appended to a JSON Lines file and
/// kept in memory.
class modem_server {
 public:
  /// Binds and listens. Port 0 picks an ephemeral port. Throws link_error
  /// on bind failure.
  modem_server(const std::string& host, int port,
               std::vector<fault_spec> faults = {}, std::string log_path = {});
  ~modem_server();

  modem_server(const modem_server&) = delete;
  modem_server& operator=(const modem_server&) = delete;

  int port() const { return port_; }

  /// Accepts and serves connections one at a time until stop() is called.
  void serve();

  /// Unblocks serve(). Safe to call from another thread or a signal path.
  void stop();

  /// All log entries across connections, in arrival order.
  std::vector<network_log_entry> log_entries() const;

 private:
  void handle_connection(int fd);
  void append_log(const network_log_entry& e);

  int listen_fd_ = -1;
  int port_ = 0;
  std::vector<fault_spec> faults_;
  std::string log_path_;
  std::atomic<bool> stopping_{false};

  mutable std::mutex log_mutex_;
  std::vector<network_log_entry> log_;
};

/// Parses "host:port" (host may be empty for 0.0.0.0). Throws link_error.
std::pair<std::string, int> parse_host_port(const std::string& spec);

/// Parses a fault-plan JSON document:
///   [{"match":"CMGS","behavior":"cms_error","code":500,"count":2}, ...]
/// Entries expand `count` times in declaration order. Throws scenario_error.
std::vector<fault_spec> parse_fault_plan(std::string_view text);

}  // namespace firesafe
