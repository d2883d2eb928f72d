// l2sw: run, generate and validate switch traces.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "l2sw/error.hpp"
#include "l2sw/switch_core.hpp"
#include "l2sw/trace.hpp"

namespace {

constexpr int kExitInput = 2;
constexpr int kExitAudit = 3;

std::vector<l2sw::TraceRecord> load_trace(const std::string& path) {
  if (path == "-") return l2sw::read_trace(std::cin);
  std::ifstream in(path);
  if (!in) throw l2sw::InputError("cannot open trace \"" + path + "\"");
  return l2sw::read_trace(in);
}

void write_file(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw l2sw::InputError("cannot write \"" + path + "\"");
  out << text;
  if (!out) throw l2sw::InputError("write failed for \"" + path + "\"");
}

void print_warnings(const l2sw::TraceReport& report) {
  for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cycle-level simulator of a 4-port store-and-forward Ethernet switch"};
  app.require_subcommand(1);

  l2sw::SwitchConfig config;
  std::string trace_path;
  std::string out_path;
  std::string stats_path;
  auto* run = app.add_subcommand("run", "simulate a trace");
  run->add_option("--trace", trace_path, "input trace (JSONL), - for stdin")->required();
  run->add_option("--out", out_path, "egress events (JSONL), - for stdout")->default_val("-");
  run->add_option("--stats", stats_path, "stats JSON file");
  run->add_option("--ports", config.ports, "number of ports")->capture_default_str();
  run->add_option("--blocks", config.blocks, "buffer blocks")->capture_default_str();
  run->add_option("--voq-depth", config.voq_depth, "VOQ depth")->capture_default_str();
  run->add_flag("--fix-flood-leak", config.fix_flood_leak, "release blocks of dropped flood copies");
  run->add_option("--max-cycles", config.max_cycles, "switch-cycle limit")->capture_default_str();

  std::string scenario;
  std::optional<std::size_t> frames;
  std::uint64_t seed = 1;
  std::string manifest_path;
  auto* gen = app.add_subcommand("gen", "write a named scenario trace to stdout");
  gen->add_option("--scenario", scenario, "scenario name")
      ->required()
      ->check(CLI::IsMember(l2sw::scenario_names()));
  gen->add_option("--frames", frames, "frames per port");
  gen->add_option("--seed", seed, "payload seed")->capture_default_str();
  gen->add_option("--manifest", manifest_path, "write the scenario description here");

  std::string validate_path;
  std::size_t validate_ports = config.ports;
  auto* validate = app.add_subcommand("validate", "check a trace without running it");
  validate->add_option("--trace", validate_path, "input trace (JSONL), - for stdin")->required();
  validate->add_option("--ports", validate_ports, "number of ports")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    if (*run) {
      config.validate();
      const auto records = load_trace(trace_path);
      print_warnings(l2sw::validate_trace(records, config.ports));
      const auto result = l2sw::run(config, l2sw::to_ingress(records));
      std::ostringstream events;
      l2sw::write_events(events, result.egress);
      write_file(out_path, events.str());
      if (!stats_path.empty()) write_file(stats_path, l2sw::stats_json(result.stats));
      if (result.stats.truncated) std::cerr << "note: run stopped at --max-cycles before quiescence\n";
    } else if (*gen) {
      const auto s = l2sw::make_scenario(scenario, frames, seed);
      l2sw::write_trace(std::cout, s.records);
      if (!manifest_path.empty()) write_file(manifest_path, l2sw::manifest_json(s, frames, seed));
    } else if (*validate) {
      const auto records = load_trace(validate_path);
      print_warnings(l2sw::validate_trace(records, validate_ports));
      std::cerr << records.size() << " records ok\n";
    }
  } catch (const l2sw::InvariantViolation& e) {
    std::cerr << "audit failure: " << e.what() << '\n';
    return kExitAudit;
  } catch (const l2sw::InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return 0;
}
