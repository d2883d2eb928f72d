#include "l2sw/trace.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <tuple>

#include "json.hpp"

#include "l2sw/error.hpp"

namespace l2sw {

namespace {

using Json = nlohmann::ordered_json;

const std::set<std::string> kTraceFields = {"port",       "start_gmii_cycle", "dst",        "src",
                                            "ethertype", "payload_hex",      "corrupt_fcs"};

std::string hex16(std::uint16_t v) {
  char buf[5];
  std::snprintf(buf, sizeof buf, "%04x", static_cast<unsigned>(v));
  return buf;
}

std::uint16_t parse_ethertype(const std::string& text) {
  if (text.size() != 4) throw InputError("ethertype must be 4 hex digits, got \"" + text + "\"");
  const Bytes b = from_hex(text);
  return static_cast<std::uint16_t>((b[0] << 8) | b[1]);
}

const Json& require(const Json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw InputError(std::string("missing field \"") + key + "\"");
  return *it;
}

std::uint64_t require_unsigned(const Json& obj, const char* key) {
  const Json& v = require(obj, key);
  if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
    throw InputError(std::string("field \"") + key + "\" must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

std::string require_string(const Json& obj, const char* key) {
  const Json& v = require(obj, key);
  if (!v.is_string()) throw InputError(std::string("field \"") + key + "\" must be a string");
  return v.get<std::string>();
}

TraceRecord parse_record(const std::string& text) {
  Json obj;
  try {
    obj = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
  if (!obj.is_object()) throw InputError("record must be a JSON object");
  for (const auto& [key, _] : obj.items()) {
    if (!kTraceFields.contains(key)) throw InputError("unknown field \"" + key + "\"");
  }
  TraceRecord r;
  r.port = static_cast<PortId>(require_unsigned(obj, "port"));
  r.start_gmii_cycle = require_unsigned(obj, "start_gmii_cycle");
  r.frame.dst = MacAddress::parse(require_string(obj, "dst"));
  r.frame.src = MacAddress::parse(require_string(obj, "src"));
  r.frame.ethertype = parse_ethertype(require_string(obj, "ethertype"));
  r.frame.payload = from_hex(require_string(obj, "payload_hex"));
  if (const auto it = obj.find("corrupt_fcs"); it != obj.end()) {
    if (!it->is_boolean()) throw InputError("field \"corrupt_fcs\" must be a boolean");
    r.corrupt_fcs = it->get<bool>();
  }
  return r;
}

}  // namespace

std::vector<TraceRecord> read_trace(std::istream& in) {
  std::vector<TraceRecord> out;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (text.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      TraceRecord r = parse_record(text);
      r.line = line;
      out.push_back(std::move(r));
    } catch (const TraceError&) {
      throw;
    } catch (const InputError& e) {
      throw TraceError(line, e.what());
    }
  }
  if (in.bad()) throw InputError("error reading trace");
  return out;
}

std::string to_json_line(const TraceRecord& r) {
  Json obj;
  obj["port"] = r.port;
  obj["start_gmii_cycle"] = r.start_gmii_cycle;
  obj["dst"] = r.frame.dst.to_string();
  obj["src"] = r.frame.src.to_string();
  obj["ethertype"] = hex16(r.frame.ethertype);
  obj["payload_hex"] = to_hex(r.frame.payload);
  if (r.corrupt_fcs) obj["corrupt_fcs"] = true;
  return obj.dump();
}

void write_trace(std::ostream& out, std::span<const TraceRecord> records) {
  for (const auto& r : records) out << to_json_line(r) << '\n';
}

TraceReport validate_trace(std::span<const TraceRecord> records, std::size_t ports) {
  TraceReport report;
  std::map<PortId, std::vector<const TraceRecord*>> by_port;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const TraceRecord& r = records[i];
    const std::size_t line = r.line ? r.line : i + 1;
    if (r.port >= ports) {
      throw TraceError(line, "port " + std::to_string(r.port) + " out of range (ports=" +
                                 std::to_string(ports) + ")");
    }
    if (r.frame.payload.size() > kMaxPayload) {
      throw TraceError(line, "payload of " + std::to_string(r.frame.payload.size()) +
                                 " bytes exceeds 1500");
    }
    const std::size_t body = kHeaderLen + r.frame.payload.size() + kFcsLen;
    if (body < kShortBodyWarning) {
      report.warnings.push_back("line " + std::to_string(line) + ": frame body of " +
                                std::to_string(body) + " bytes is under 60");
    }
    by_port[r.port].push_back(&r);
  }
  for (auto& [port, list] : by_port) {
    std::stable_sort(list.begin(), list.end(), [](const TraceRecord* a, const TraceRecord* b) {
      return a->start_gmii_cycle < b->start_gmii_cycle;
    });
    for (std::size_t i = 1; i < list.size(); ++i) {
      const TraceRecord& prev = *list[i - 1];
      const TraceRecord& cur = *list[i];
      const std::uint64_t prev_end = prev.start_gmii_cycle + wire_length(prev.frame.payload.size());
      const std::size_t line = cur.line ? cur.line : static_cast<std::size_t>(&cur - records.data()) + 1;
      if (cur.start_gmii_cycle < prev_end) {
        throw TraceError(line, "frame on port " + std::to_string(port) + " overlaps the previous one");
      }
      if (cur.start_gmii_cycle - prev_end < kInterFrameGap) {
        throw TraceError(line, "inter-frame gap on port " + std::to_string(port) + " is " +
                                   std::to_string(cur.start_gmii_cycle - prev_end) +
                                   " cycles, need at least 12");
      }
    }
  }
  return report;
}

std::vector<IngressFrame> to_ingress(std::span<const TraceRecord> records) {
  std::vector<IngressFrame> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back({r.port, r.start_gmii_cycle, r.frame, r.corrupt_fcs});
  return out;
}

EgressEvent to_event(const EgressFrame& egress) {
  if (!egress.preamble_ok) throw InvariantViolation("egress frame without a valid preamble");
  const ParsedFrame parsed = parse_frame(egress.body);
  return {egress.port, egress.first_gmii_cycle, parsed.frame, parsed.fcs, parsed.fcs_ok};
}

std::string to_json_line(const EgressEvent& e) {
  Json obj;
  obj["port"] = e.port;
  obj["first_gmii_cycle"] = e.first_gmii_cycle;
  obj["dst"] = e.frame.dst.to_string();
  obj["src"] = e.frame.src.to_string();
  obj["ethertype"] = hex16(e.frame.ethertype);
  obj["payload_hex"] = to_hex(e.frame.payload);
  obj["fcs_hex"] = to_hex(e.fcs);
  obj["fcs_ok"] = e.fcs_ok;
  return obj.dump();
}

void write_events(std::ostream& out, std::span<const EgressFrame> egress) {
  std::vector<EgressEvent> events;
  events.reserve(egress.size());
  for (const auto& f : egress) events.push_back(to_event(f));
  std::stable_sort(events.begin(), events.end(), [](const EgressEvent& a, const EgressEvent& b) {
    return std::tie(a.first_gmii_cycle, a.port) < std::tie(b.first_gmii_cycle, b.port);
  });
  for (const auto& e : events) out << to_json_line(e) << '\n';
}

std::string stats_json(const SwitchStats& s) {
  Json obj;
  Json ports = Json::array();
  for (const auto& p : s.ports) {
    Json j;
    j["rx_frames"] = p.rx_frames;
    j["rx_crc_drops"] = p.rx_crc_drops;
    j["rx_backpressure_corruptions"] = p.rx_backpressure_corruptions;
    j["rx_gmii_errors"] = p.rx_gmii_errors;
    j["rx_runts"] = p.rx_runts;
    j["tx_frames"] = p.tx_frames;
    j["voq_drops"] = p.voq_drops;
    ports.push_back(std::move(j));
  }
  obj["ports"] = std::move(ports);
  obj["floods"] = s.floods;
  obj["unicasts"] = s.unicasts;
  obj["learns"] = s.learns;
  obj["evictions"] = s.evictions;
  obj["flood_voq_drops"] = s.flood_voq_drops;
  obj["leaked_blocks"] = s.leaked_blocks;
  obj["free_list_low_watermark"] = s.free_list_low_watermark;
  obj["final_free_blocks"] = s.final_free_blocks;
  obj["wr_active_cycles"] = s.wr_active_cycles;
  obj["wr_stall_cycles"] = s.wr_stall_cycles;
  obj["wr_stall_cycle_fraction"] = s.wr_stall_cycle_fraction;
  obj["cycles"] = s.cycles;
  obj["truncated"] = s.truncated;
  return obj.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// scenario generators

MacAddress host_mac(std::size_t port) {
  return MacAddress({0x02, 0x00, 0x00, 0x00, 0x00, static_cast<Byte>(port + 1)});
}

namespace {

constexpr std::uint16_t kEthertype = 0x0800;

// Tagged payload: port and sequence number up front, seeded bytes after.
Bytes make_payload(std::mt19937_64& rng, std::size_t len, std::size_t port, std::size_t seq) {
  Bytes p(len);
  for (std::size_t i = 0; i < len; ++i) p[i] = static_cast<Byte>(rng() >> 56);
  if (len > 0) p[0] = static_cast<Byte>(port);
  if (len > 1) p[1] = static_cast<Byte>(seq >> 8);
  if (len > 2) p[2] = static_cast<Byte>(seq);
  return p;
}

TraceRecord record(std::size_t port, std::uint64_t start, MacAddress dst, MacAddress src, Bytes payload,
                   bool corrupt = false) {
  TraceRecord r;
  r.port = port;
  r.start_gmii_cycle = start;
  r.frame = {dst, src, kEthertype, std::move(payload)};
  r.corrupt_fcs = corrupt;
  return r;
}

void sort_records(std::vector<TraceRecord>& records) {
  std::stable_sort(records.begin(), records.end(), [](const TraceRecord& a, const TraceRecord& b) {
    return std::tie(a.start_gmii_cycle, a.port) < std::tie(b.start_gmii_cycle, b.port);
  });
}

constexpr std::size_t kPorts = 4;

Scenario flood_then_learn(std::size_t rounds, std::mt19937_64& rng) {
  Scenario s{"flood-then-learn",
             "Every port sends in parallel. Round one goes to the broadcast address and floods to "
             "the three other ports while the switch learns each sender. Later rounds go from port "
             "p to the host on port (p+1) mod 4 and are forwarded as unicast.",
             {}};
  constexpr std::size_t kPayload = 46;
  constexpr std::uint64_t kPeriod = 100;
  for (std::size_t r = 0; r < rounds; ++r) {
    for (std::size_t p = 0; p < kPorts; ++p) {
      const MacAddress dst = r == 0 ? kBroadcastMac : host_mac((p + 1) % kPorts);
      s.records.push_back(record(p, r * kPeriod, dst, host_mac(p), make_payload(rng, kPayload, p, r)));
    }
  }
  return s;
}

Scenario crc_drop(std::size_t frames, std::mt19937_64& rng) {
  Scenario s{"crc-drop",
             "Port 0 sends frames whose FCS has one bit inverted. The receiver discards them, "
             "nothing reaches any egress port and every buffer block returns to the free list.",
             {}};
  for (std::size_t k = 0; k < frames; ++k) {
    s.records.push_back(record(0, k * 100, kBroadcastMac, host_mac(0), make_payload(rng, 46, 0, k), true));
  }
  return s;
}

Scenario voq_flood_leak(std::size_t frames, std::mt19937_64& rng) {
  Scenario s{"voq-flood-leak",
             "Port 3 announces its host first. Ports 0, 1 and 2 then send single-block unicast "
             "frames to that host back to back, three times faster than port 3 can drain, so its "
             "VOQ fills. Right after its last unicast, port 0 sends a frame to an unknown address. "
             "With the default 8 frames per port the VOQ of port 3 is full at that moment and the "
             "flood copy for port 3 is the only frame dropped. Without the leak fix its block is "
             "never released.",
             {}};
  constexpr std::size_t kPayload = 63 - kHeaderLen - kFcsLen;  // one block
  constexpr std::uint64_t kPeriod = wire_length(kPayload) + kInterFrameGap;
  constexpr std::uint64_t kBase = 200;
  const MacAddress target = host_mac(3);
  s.records.push_back(record(3, 0, kBroadcastMac, target, make_payload(rng, kPayload, 3, 0)));
  for (std::size_t p = 0; p < 3; ++p) {
    for (std::size_t k = 0; k < frames; ++k) {
      s.records.push_back(record(p, kBase + k * kPeriod, target, host_mac(p), make_payload(rng, kPayload, p, k)));
    }
  }
  const MacAddress unknown({0x02, 0x00, 0x00, 0x00, 0x00, 0x99});
  s.records.push_back(record(0, kBase + frames * kPeriod, unknown, host_mac(0),
                             make_payload(rng, kPayload, 0, frames)));
  return s;
}

Scenario line_rate(std::size_t frames, std::mt19937_64& rng) {
  Scenario s{"line-rate-4port",
             "All four ports first send one broadcast frame so every host is learned. Then each "
             "port p sends back-to-back frames with a 200-byte body to the host on port (p+1) mod "
             "4 with minimum inter-frame gap, a full-load unicast permutation.",
             {}};
  constexpr std::size_t kPayload = 200 - kHeaderLen - kFcsLen;
  constexpr std::uint64_t kPeriod = wire_length(kPayload) + kInterFrameGap;
  constexpr std::uint64_t kUnicastStart = 1000;
  for (std::size_t p = 0; p < kPorts; ++p) {
    s.records.push_back(record(p, 0, kBroadcastMac, host_mac(p), make_payload(rng, kPayload, p, 0)));
  }
  for (std::size_t k = 0; k < frames; ++k) {
    for (std::size_t p = 0; p < kPorts; ++p) {
      s.records.push_back(record(p, kUnicastStart + k * kPeriod, host_mac((p + 1) % kPorts), host_mac(p),
                                 make_payload(rng, kPayload, p, k + 1)));
    }
  }
  return s;
}

}  // namespace

std::vector<std::string> scenario_names() {
  return {"flood-then-learn", "crc-drop", "voq-flood-leak", "line-rate-4port"};
}

Scenario make_scenario(std::string_view name, std::optional<std::size_t> frames, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Scenario s;
  if (name == "flood-then-learn") {
    s = flood_then_learn(frames.value_or(2), rng);
  } else if (name == "crc-drop") {
    s = crc_drop(frames.value_or(1), rng);
  } else if (name == "voq-flood-leak") {
    s = voq_flood_leak(frames.value_or(8), rng);
  } else if (name == "line-rate-4port") {
    s = line_rate(frames.value_or(12), rng);
  } else {
    throw InputError("unknown scenario \"" + std::string(name) + "\"");
  }
  sort_records(s.records);
  return s;
}

std::string manifest_json(const Scenario& scenario, std::optional<std::size_t> frames, std::uint64_t seed) {
  Json obj;
  obj["scenario"] = scenario.name;
  obj["description"] = scenario.description;
  obj["seed"] = seed;
  if (frames) obj["frames"] = *frames;
  obj["records"] = scenario.records.size();
  return obj.dump(2) + "\n";
}

}  // namespace l2sw
