// SPDX-License-Identifier: Apache-2.0
//
// firesafe CLI: validate configurations, run scenarios against an in-process
// or remote modem, serve the modem emulator over TCP, and summarize incident
// CSVs or run transcripts.

#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>

#include "firesafe/config.hpp"
#include "firesafe/report.hpp"
#include "firesafe/sim.hpp"
#include "firesafe/tcp.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

firesafe::modem_server* g_server = nullptr;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw firesafe::link_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw firesafe::link_error("cannot write " + path);
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out) throw firesafe::link_error("short write to " + path);
}

int cmd_validate(const std::string& config_path) {
  std::string text;
  try {
    text = read_file(config_path);
  } catch (const firesafe::error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  try {
    const firesafe::config cfg = firesafe::parse_config(text);
    std::cout << "OK\n" << firesafe::serialize_config(cfg) << "\n";
    return kExitOk;
  } catch (const firesafe::error& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return kExitValidation;
  }
}

int cmd_run(const std::string& config_path, const std::string& scenario_path,
            const std::string& out_path, const std::string& modem_spec) {
  firesafe::config cfg;
  firesafe::scenario scen;
  try {
    cfg = firesafe::parse_config(read_file(config_path));
    scen = firesafe::parse_scenario(read_file(scenario_path));
  } catch (const firesafe::link_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  } catch (const firesafe::error& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitValidation;
  }

  try {
    firesafe::virtual_clock clock;
    std::vector<firesafe::transcript_record> transcript;

    if (modem_spec == "inproc") {
      firesafe::modem_session modem;
      firesafe::inproc_link link(modem, clock);
      transcript = firesafe::run_scenario(cfg, scen, link, clock);
    } else if (modem_spec.rfind("tcp:", 0) == 0) {
      const auto [host, port] = firesafe::parse_host_port(modem_spec.substr(4));
      firesafe::tcp_link link(host, port, clock);
      transcript = firesafe::run_scenario(cfg, scen, link, clock);
    } else {
      std::cerr << "invalid input: --modem must be 'inproc' or 'tcp:<host:port>'\n";
      return kExitValidation;
    }

    write_file(out_path, firesafe::transcript_to_jsonl(transcript));
    const firesafe::transcript_summary s =
        firesafe::summarize_transcript(transcript);
    std::cout << "scenario=" << scen.name << " records=" << transcript.size()
              << " sms_delivered=" << s.sms_sent
              << " calls_placed=" << s.calls_placed
              << " failures=" << s.failures << "\n";
    return kExitOk;
  } catch (const firesafe::error& e) {
    std::cerr << "runtime failure: " << e.what() << "\n";
    return kExitRuntime;
  }
}

int cmd_modem_serve(const std::string& listen_spec, const std::string& faults_path,
                    const std::string& log_path) {
  try {
    std::vector<firesafe::fault_spec> faults;
    if (!faults_path.empty())
      faults = firesafe::parse_fault_plan(read_file(faults_path));
    const auto [host, port] = firesafe::parse_host_port(listen_spec);
    firesafe::modem_server server(host, port, std::move(faults), log_path);
    g_server = &server;
    std::signal(SIGINT, [](int) {
      if (g_server) g_server->stop();
    });
    std::signal(SIGTERM, [](int) {
      if (g_server) g_server->stop();
    });
    std::cout << "listening on " << (host.empty() ? "0.0.0.0" : host) << ":"
              << server.port() << "\n"
              << std::flush;
    server.serve();
    g_server = nullptr;
    return kExitOk;
  } catch (const firesafe::error& e) {
    std::cerr << "runtime failure: " << e.what() << "\n";
    return kExitRuntime;
  }
}

int cmd_report(const std::string& kind, const std::string& input_path) {
  std::string text;
  try {
    text = read_file(input_path);
  } catch (const firesafe::error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  try {
    if (kind == "incidents") {
      const auto records = firesafe::parse_incident_csv(text);
      const auto summary = firesafe::aggregate(records);
      for (const auto& r : summary.ranked)
        std::printf("%-24s %6lld\n", r.category.c_str(),
                    static_cast<long long>(r.count));
      std::printf("total %lld\n", static_cast<long long>(summary.total));
      if (summary.max)
        std::printf("max %s %lld\n", summary.max->category.c_str(),
                    static_cast<long long>(summary.max->count));
      if (summary.min)
        std::printf("min %s %lld\n", summary.min->category.c_str(),
                    static_cast<long long>(summary.min->count));
      return kExitOk;
    }
    if (kind == "transcript") {
      const auto records = firesafe::parse_transcript(text);
      const auto s = firesafe::summarize_transcript(records);
      std::printf("detections %lld\n", static_cast<long long>(s.detections));
      std::printf("sms_sent %lld\n", static_cast<long long>(s.sms_sent));
      std::printf("calls_placed %lld\n", static_cast<long long>(s.calls_placed));
      std::printf("failures %lld\n", static_cast<long long>(s.failures));
      if (s.time_to_cutoff)
        std::printf("time_to_cutoff_ms %lld\n",
                    static_cast<long long>(*s.time_to_cutoff));
      else
        std::printf("time_to_cutoff_ms n/a\n");
      if (s.time_to_first_sms)
        std::printf("time_to_first_sms_ms %lld\n",
                    static_cast<long long>(*s.time_to_first_sms));
      else
        std::printf("time_to_first_sms_ms n/a\n");
      return kExitOk;
    }
    std::cerr << "invalid input: --kind must be 'incidents' or 'transcript'\n";
    return kExitValidation;
  } catch (const firesafe::error& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitValidation;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deterministic fire-safety controller simulator"};
  app.require_subcommand(1);

  std::string config_path, scenario_path, out_path, modem_spec = "inproc";
  std::string listen_spec, faults_path, log_path;
  std::string report_kind, report_input;

  auto* validate = app.add_subcommand("validate", "Check a configuration file");
  validate->add_option("--config", config_path, "configuration JSON")->required();

  auto* run = app.add_subcommand("run", "Run a scenario and write the transcript");
  run->add_option("--config", config_path, "configuration JSON")->required();
  run->add_option("--scenario", scenario_path, "scenario JSON")->required();
  run->add_option("--out", out_path, "transcript output path (JSON Lines)")->required();
  run->add_option("--modem", modem_spec, "inproc | tcp:<host:port>");

  auto* serve = app.add_subcommand("modem-serve", "Serve the emulated modem over TCP");
  serve->add_option("--listen", listen_spec, "host:port (port 0 = ephemeral)")->required();
  serve->add_option("--faults", faults_path, "fault-plan JSON");
  serve->add_option("--log", log_path, "network log output (JSON Lines, appended)");

  auto* report = app.add_subcommand("report", "Summarize incidents CSV or a transcript");
  report->add_option("--kind", report_kind, "incidents | transcript")->required();
  report->add_option("input", report_input, "input file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) return cmd_validate(config_path);
    if (run->parsed()) return cmd_run(config_path, scenario_path, out_path, modem_spec);
    if (serve->parsed()) return cmd_modem_serve(listen_spec, faults_path, log_path);
    if (report->parsed()) return cmd_report(report_kind, report_input);
  } catch (const std::exception& e) {
    std::cerr << "runtime failure: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}
