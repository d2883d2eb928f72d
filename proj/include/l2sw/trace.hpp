#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "l2sw/frame.hpp"
#include "l2sw/switch_core.hpp"

namespace l2sw {

/// One input line: a frame offered to `port` starting at a GMII cycle.
struct TraceRecord {
  PortId port = 0;
  std::uint64_t start_gmii_cycle = 0;
  EthernetFrame frame;
  bool corrupt_fcs = false;
  std::size_t line = 0;  // 1-based source line, 0 when generated
};

/// One output line per frame seen on an egress GMII bus.
struct EgressEvent {
  PortId port = 0;
  std::uint64_t first_gmii_cycle = 0;
  EthernetFrame frame;
  std::array<Byte, kFcsLen> fcs{};
  bool fcs_ok = false;
};

/// Reads line-delimited JSON records; blank lines are skipped.
/// Throws TraceError naming the offending line.
std::vector<TraceRecord> read_trace(std::istream& in);
void write_trace(std::ostream& out, std::span<const TraceRecord> records);
std::string to_json_line(const TraceRecord& record);

struct TraceReport {
  std::vector<std::string> warnings;
};

/// Checks port range, payload size and the per-port 12-cycle gap rule.
/// Short bodies (under 60 bytes) are warnings. Throws TraceError.
TraceReport validate_trace(std::span<const TraceRecord> records, std::size_t ports);

std::vector<IngressFrame> to_ingress(std::span<const TraceRecord> records);

EgressEvent to_event(const EgressFrame& egress);
std::string to_json_line(const EgressEvent& event);
/// Events ordered by (first_gmii_cycle, port).
void write_events(std::ostream& out, std::span<const EgressFrame> egress);

std::string stats_json(const SwitchStats& stats);

/// Named traffic pattern with a one-paragraph description for the manifest.
struct Scenario {
  std::string name;
  std::string description;
  std::vector<TraceRecord> records;
};

std::vector<std::string> scenario_names();

/// host(p) is the station attached to port p: 02:00:00:00:00:(p+1).
MacAddress host_mac(std::size_t port);

/// `frames` overrides the scenario's per-port frame count. Throws InputError
/// for an unknown name.
Scenario make_scenario(std::string_view name, std::optional<std::size_t> frames = std::nullopt,
                       std::uint64_t seed = 1);

std::string manifest_json(const Scenario& scenario, std::optional<std::size_t> frames,
                          std::uint64_t seed);

}  // namespace l2sw
