// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "test_util.hpp"

namespace {

namespace fs = std::filesystem;

struct cmd_result {
  int exit_code = -1;
  std::string output;  // stdout + stderr
};

cmd_result run_cmd(const std::string& args) {
  const std::string cmd = std::string(FIRESAFE_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  cmd_result r;
  char buf[1024];
  while (std::fgets(buf, sizeof(buf), pipe)) r.output += buf;
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

fs::path temp_file(const std::string& name) {
  return fs::temp_directory_path() / ("firesafe_cli_" + name);
}

std::string qq(const fs::path& p) { return "'" + p.string() + "'"; }

// Starts `firesafe modem-serve` on an ephemeral port, reads the announced
// port from its stdout, and kills it on destruction.
struct serve_process {
  explicit serve_process(const std::string& extra_args = "") {
    int fds[2];
    REQUIRE(pipe(fds) == 0);
    pid = fork();
    REQUIRE(pid >= 0);
    if (pid == 0) {
      dup2(fds[1], STDOUT_FILENO);
      close(fds[0]);
      close(fds[1]);
      std::string arg_listen = "--listen";
      std::string arg_addr = "127.0.0.1:0";
      if (extra_args.empty()) {
        execl(FIRESAFE_CLI_PATH, FIRESAFE_CLI_PATH, "modem-serve",
              arg_listen.c_str(), arg_addr.c_str(), (char*)nullptr);
      } else {
        execl(FIRESAFE_CLI_PATH, FIRESAFE_CLI_PATH, "modem-serve",
              arg_listen.c_str(), arg_addr.c_str(), "--log",
              extra_args.c_str(), (char*)nullptr);
      }
      _exit(127);
    }
    close(fds[1]);
    FILE* out = fdopen(fds[0], "r");
    char line[256] = {0};
    REQUIRE(std::fgets(line, sizeof(line), out) != nullptr);
    // "listening on 127.0.0.1:PORT"
    const std::string text = line;
    const auto colon = text.rfind(':');
    REQUIRE(colon != std::string::npos);
    port = std::stoi(text.substr(colon + 1));
    std::fclose(out);
  }

  ~serve_process() {
    kill(pid, SIGTERM);
    // SIGTERM may land while blocked in accept(); follow up hard.
    usleep(50 * 1000);
    kill(pid, SIGKILL);
    int status = 0;
    waitpid(pid, &status, 0);
  }

  pid_t pid = -1;
  int port = 0;
};

}  // namespace

TEST_CASE("validate echoes the canonical config on success") {
  const auto r = run_cmd("validate --config " +
                         qq(fstest::data_path("configs/default.json")));
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("OK\n") == 0);
  CHECK(r.output.find("\"resend_delay\":12000") != std::string::npos);
  CHECK(r.output.find("\"site_name\":\"Market Circle Warehouse\"") !=
        std::string::npos);
}

TEST_CASE("validate exits 1 naming the offending field") {
  const auto bad = temp_file("bad_config.json");
  std::ofstream(bad) << R"({
    "owner": "+233244000001",
    "fire_service": "+233302000001",
    "location": "x",
    "resend_delay": 20000
  })";
  const auto r = run_cmd("validate --config " + qq(bad));
  CHECK(r.exit_code == 1);
  CHECK(r.output.find("timing.resend_delay") != std::string::npos);
  fs::remove(bad);
}

TEST_CASE("validate exits 2 when the file cannot be read") {
  const auto r = run_cmd("validate --config /nonexistent/nope.json");
  CHECK(r.exit_code == 2);
}

TEST_CASE("run writes a deterministic transcript and a summary line") {
  const auto out1 = temp_file("run1.jsonl");
  const auto out2 = temp_file("run2.jsonl");
  const std::string base =
      "run --config " + qq(fstest::data_path("configs/default.json")) +
      " --scenario " + qq(fstest::data_path("scenarios/flagship.json"));

  const auto r1 = run_cmd(base + " --out " + qq(out1));
  CHECK(r1.exit_code == 0);
  CHECK(r1.output.find("scenario=flagship") != std::string::npos);
  CHECK(r1.output.find("sms_delivered=3") != std::string::npos);
  CHECK(r1.output.find("calls_placed=2") != std::string::npos);

  const auto r2 = run_cmd(base + " --out " + qq(out2));
  CHECK(r2.exit_code == 0);
  CHECK(fstest::read_file(out1.string()) == fstest::read_file(out2.string()));
  fs::remove(out1);
  fs::remove(out2);
}

TEST_CASE("run exits 1 on invalid inputs") {
  const auto out = temp_file("never.jsonl");
  const auto bad = temp_file("bad_scenario.json");
  std::ofstream(bad) << R"({"name":"x","horizon_ms":1,"events":[{"at_ms":5,"kind":"PRESS_RESET"}]})";
  const auto r = run_cmd("run --config " +
                         qq(fstest::data_path("configs/default.json")) +
                         " --scenario " + qq(bad) + " --out " + qq(out));
  CHECK(r.exit_code == 1);
  fs::remove(bad);
}

TEST_CASE("run rejects an unknown --modem spec") {
  const auto out = temp_file("junk.jsonl");
  const auto r = run_cmd("run --config " +
                         qq(fstest::data_path("configs/default.json")) +
                         " --scenario " +
                         qq(fstest::data_path("scenarios/flagship.json")) +
                         " --out " + qq(out) + " --modem carrier-pigeon");
  CHECK(r.exit_code == 1);
}

TEST_CASE("run exits 2 when the TCP modem is unreachable") {
  const auto out = temp_file("tcp_fail.jsonl");
  const auto r = run_cmd("run --config " +
                         qq(fstest::data_path("configs/default.json")) +
                         " --scenario " +
                         qq(fstest::data_path("scenarios/flagship.json")) +
                         " --out " + qq(out) + " --modem tcp:127.0.0.1:1");
  CHECK(r.exit_code == 2);
}

TEST_CASE("modem-serve round trip equals the in-process run") {
  const auto log = temp_file("serve_log.jsonl");
  const auto out_tcp = temp_file("tcp.jsonl");
  const auto out_local = temp_file("local.jsonl");
  fs::remove(log);

  serve_process server(log.string());
  const std::string base =
      "run --config " + qq(fstest::data_path("configs/default.json")) +
      " --scenario " + qq(fstest::data_path("scenarios/flagship.json"));
  const auto tcp = run_cmd(base + " --out " + qq(out_tcp) + " --modem tcp:127.0.0.1:" +
                           std::to_string(server.port));
  CHECK(tcp.exit_code == 0);
  const auto local = run_cmd(base + " --out " + qq(out_local));
  CHECK(local.exit_code == 0);
  CHECK(fstest::read_file(out_tcp.string()) ==
        fstest::read_file(out_local.string()));

  // The remote log carries the same 3 SMS + 2 calls at virtual times.
  const std::string log_text = fstest::read_file(log.string());
  CHECK(std::count(log_text.begin(), log_text.end(), '\n') == 5);
  CHECK(log_text.find("\"kind\":\"SMS\"") != std::string::npos);
  CHECK(log_text.find("\"kind\":\"CALL\"") != std::string::npos);
  CHECK(log_text.find("\"at\":15200") != std::string::npos);

  fs::remove(log);
  fs::remove(out_tcp);
  fs::remove(out_local);
}

TEST_CASE("modem-serve exits 2 when the port is taken") {
  serve_process holder;
  const auto r =
      run_cmd("modem-serve --listen 127.0.0.1:" + std::to_string(holder.port));
  CHECK(r.exit_code == 2);
}

TEST_CASE("report incidents prints the ranked table") {
  const auto r = run_cmd("report --kind incidents " +
                         qq(fstest::data_path("fixtures/ghana_2018_regions.csv")));
  CHECK(r.exit_code == 0);
  // Top row is the maximum: "Ashanti Region <pad> 542".
  const std::string first = r.output.substr(0, r.output.find('\n'));
  CHECK(first.rfind("Ashanti Region", 0) == 0);
  CHECK(first.find(" 542") == first.size() - 4);
  CHECK(r.output.find("total 2728") != std::string::npos);
  CHECK(r.output.find("min Upper West Region 64") != std::string::npos);

  const auto sectors = run_cmd("report --kind incidents " +
                               qq(fstest::data_path("fixtures/ghana_2018_sectors.csv")));
  CHECK(sectors.exit_code == 0);
  const std::string top = sectors.output.substr(0, sectors.output.find('\n'));
  CHECK(top.rfind("Domestic", 0) == 0);
  CHECK(top.find(" 1794") == top.size() - 5);
  CHECK(sectors.output.find("total 4280") != std::string::npos);
}

TEST_CASE("report transcript shows reset suppression") {
  const auto out = temp_file("reset.jsonl");
  const auto run = run_cmd("run --config " +
                           qq(fstest::data_path("configs/default.json")) +
                           " --scenario " +
                           qq(fstest::data_path("scenarios/reset_at_5s.json")) +
                           " --out " + qq(out));
  REQUIRE(run.exit_code == 0);
  const auto r = run_cmd("report --kind transcript " + qq(out));
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("calls_placed 0\n") != std::string::npos);
  CHECK(r.output.find("sms_sent 1\n") != std::string::npos);
  CHECK(r.output.find("time_to_cutoff_ms 0\n") != std::string::npos);
  fs::remove(out);
}

TEST_CASE("report exits 1 on malformed input") {
  const auto bad = temp_file("bad.csv");
  std::ofstream(bad) << "category;count\nA;1\n";
  const auto r = run_cmd("report --kind incidents " + qq(bad));
  CHECK(r.exit_code == 1);
  fs::remove(bad);
}
