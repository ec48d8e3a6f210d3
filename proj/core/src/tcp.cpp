// SPDX-License-Identifier: Apache-2.0
#include "firesafe/tcp.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <mutex>

#include <json.hpp>

namespace firesafe {

namespace {

sockaddr_in make_addr(const std::string& host, int port) {
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(static_cast<std::uint16_t>(port));
  const std::string h = host.empty() ? "0.0.0.0" : host;
  if (::inet_pton(AF_INET, h.c_str(), &addr.sin_addr) != 1) {
    if (h == "localhost")
      ::inet_pton(AF_INET, "127.0.0.1", &addr.sin_addr);
    else
      throw link_error("cannot parse address '" + h + "'");
  }
  return addr;
}

}  // namespace

tcp_link::tcp_link(const std::string& host, int port, virtual_clock& clock,
                   int real_timeout_ms)
    : clock_(clock), real_timeout_ms_(real_timeout_ms) {
  fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd_ < 0) throw link_error("socket: " + std::string(std::strerror(errno)));
  sockaddr_in addr = make_addr(host.empty() ? "127.0.0.1" : host, port);
  if (::connect(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
    const std::string what = std::strerror(errno);
    ::close(fd_);
    fd_ = -1;
    throw link_error("connect to " + host + ":" + std::to_string(port) + ": " + what);
  }
  const int one = 1;
  ::setsockopt(fd_, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
}

tcp_link::~tcp_link() {
  if (fd_ >= 0) ::close(fd_);
}

void tcp_link::write_all(std::string_view bytes) {
  std::size_t off = 0;
  while (off < bytes.size()) {
    const ssize_t n = ::send(fd_, bytes.data() + off, bytes.size() - off, MSG_NOSIGNAL);
    if (n <= 0) throw link_error("send: " + std::string(std::strerror(errno)));
    off += static_cast<std::size_t>(n);
  }
}

void tcp_link::announce_time() {
  if (announced_ == clock_.now) return;
  announced_ = clock_.now;
  write_all("#t=" + std::to_string(clock_.now) + "\r");
}

void tcp_link::send(std::string_view bytes) {
  announce_time();
  write_all(bytes);
}

void tcp_link::inject_fault(const fault_spec& f, int count) {
  announce_time();
  write_all(std::string("#fault=") + fault_match_name(f.match) + ":" +
            fault_behavior_name(f.behavior) + ":" + std::to_string(f.code) +
            ":" + std::to_string(count) + "\r");
}

std::optional<std::string> tcp_link::receive(std::int64_t budget_ms) {
  for (;;) {
    // Strip complete control lines off the front of the raw buffer.
    while (raw_.starts_with('#')) {
      const std::size_t eol = raw_.find("\r\n");
      if (eol == std::string::npos) break;  // incomplete control line
      const std::string line = raw_.substr(0, eol);
      raw_.erase(0, eol + 2);
      if (line == "#drop") {
        // The remote modem swallowed a frame: behave exactly like a local
        // timeout for this unit.
        clock_.advance(budget_ms);
        return std::nullopt;
      }
    }
    if (!raw_.empty() && !raw_.starts_with('#')) {
      // Hand over bytes up to the next control line, if any is embedded.
      const std::size_t hash = raw_.find("\r\n#");
      std::string out;
      if (hash == std::string::npos) {
        out = std::move(raw_);
        raw_.clear();
      } else {
        out = raw_.substr(0, hash + 2);
        raw_.erase(0, hash + 2);
      }
      return out;
    }

    pollfd pfd{fd_, POLLIN, 0};
    const int pr = ::poll(&pfd, 1, real_timeout_ms_);
    if (pr == 0)
      throw link_error("modem link unresponsive (wall-clock timeout)");
    if (pr < 0) throw link_error("poll: " + std::string(std::strerror(errno)));
    char buf[4096];
    const ssize_t n = ::recv(fd_, buf, sizeof(buf), 0);
    if (n == 0) throw link_error("modem link closed by peer");
    if (n < 0) throw link_error("recv: " + std::string(std::strerror(errno)));
    raw_.append(buf, static_cast<std::size_t>(n));
  }
}

modem_server::modem_server(const std::string& host, int port,
                           std::vector<fault_spec> faults, std::string log_path)
    : faults_(std::move(faults)), log_path_(std::move(log_path)) {
  listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listen_fd_ < 0)
    throw link_error("socket: " + std::string(std::strerror(errno)));
  const int one = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  sockaddr_in addr = make_addr(host, port);
  if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
    const std::string what = std::strerror(errno);
    ::close(listen_fd_);
    listen_fd_ = -1;
    throw link_error("bind " + host + ":" + std::to_string(port) + ": " + what);
  }
  if (::listen(listen_fd_, 1) != 0) {
    const std::string what = std::strerror(errno);
    ::close(listen_fd_);
    listen_fd_ = -1;
    throw link_error("listen: " + what);
  }
  sockaddr_in bound{};
  socklen_t len = sizeof(bound);
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&bound), &len);
  port_ = ntohs(bound.sin_port);
}

modem_server::~modem_server() {
  stop();
}

void modem_server::stop() {
  stopping_.store(true);
  if (listen_fd_ >= 0) {
    ::shutdown(listen_fd_, SHUT_RDWR);
    ::close(listen_fd_);
    listen_fd_ = -1;
  }
}

void modem_server::append_log(const network_log_entry& e) {
  {
    std::lock_guard lock(log_mutex_);
    log_.push_back(e);
  }
  if (!log_path_.empty()) {
    std::ofstream out(log_path_, std::ios::app);
    out << log_entry_to_json(e) << '\n';
  }
}

std::vector<network_log_entry> modem_server::log_entries() const {
  std::lock_guard lock(log_mutex_);
  return log_;
}

void modem_server::handle_connection(int fd) {
  modem_session session;
  for (const fault_spec& f : faults_) session.add_fault(f, 1);
  session.on_log([this](const network_log_entry& e) { append_log(e); });

  char buf[4096];
  for (;;) {
    const ssize_t n = ::recv(fd, buf, sizeof(buf), 0);
    if (n <= 0) break;
    for (const auto& out : session.feed(std::string_view(buf, static_cast<std::size_t>(n)))) {
      const std::string reply = out.dropped ? "#drop\r\n" : out.bytes;
      std::size_t off = 0;
      while (off < reply.size()) {
        const ssize_t w = ::send(fd, reply.data() + off, reply.size() - off, MSG_NOSIGNAL);
        if (w <= 0) return;
        off += static_cast<std::size_t>(w);
      }
    }
  }
}

void modem_server::serve() {
  while (!stopping_.load()) {
    const int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) {
      if (stopping_.load()) break;
      if (errno == EINTR) continue;
      break;
    }
    handle_connection(fd);
    ::close(fd);
  }
}

std::pair<std::string, int> parse_host_port(const std::string& spec) {
  const std::size_t colon = spec.rfind(':');
  if (colon == std::string::npos)
    throw link_error("expected host:port, got '" + spec + "'");
  const std::string host = spec.substr(0, colon);
  const std::string port_text = spec.substr(colon + 1);
  int port = 0;
  try {
    port = std::stoi(port_text);
  } catch (const std::exception&) {
    throw link_error("bad port in '" + spec + "'");
  }
  if (port < 0 || port > 65535) throw link_error("port out of range in '" + spec + "'");
  return {host, port};
}

std::vector<fault_spec> parse_fault_plan(std::string_view text) {
  nlohmann::json doc = nlohmann::json::parse(text, nullptr, false);
  if (doc.is_discarded() || !doc.is_array())
    throw scenario_error("fault plan must be a JSON array");
  std::vector<fault_spec> plan;
  for (const auto& item : doc) {
    if (!item.is_object() || !item.contains("match") ||
        !item["match"].is_string() || !item.contains("behavior") ||
        !item["behavior"].is_string())
      throw scenario_error("fault entry needs string 'match' and 'behavior'");
    const auto match = fault_match_from_name(item["match"].get<std::string>());
    const auto behavior =
        fault_behavior_from_name(item["behavior"].get<std::string>());
    if (!match) throw scenario_error("unknown fault match");
    if (!behavior) throw scenario_error("unknown fault behavior");
    fault_spec f{*match, *behavior, 500};
    if (item.contains("code")) {
      if (!item["code"].is_number_integer())
        throw scenario_error("fault 'code' must be an integer");
      f.code = item["code"].get<int>();
    }
    int count = 1;
    if (item.contains("count")) {
      if (!item["count"].is_number_integer())
        throw scenario_error("fault 'count' must be an integer");
      count = item["count"].get<int>();
    }
    if (count < 1) throw scenario_error("fault 'count' must be >= 1");
    for (int i = 0; i < count; ++i) plan.push_back(f);
  }
  return plan;
}

}  // namespace firesafe
