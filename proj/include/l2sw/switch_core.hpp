#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include "l2sw/arbiter.hpp"
#include "l2sw/block_store.hpp"
#include "l2sw/forwarding.hpp"
#include "l2sw/frame.hpp"
#include "l2sw/free_list.hpp"
#include "l2sw/read_ctrl.hpp"
#include "l2sw/rx_parser.hpp"
#include "l2sw/tx.hpp"
#include "l2sw/voq.hpp"
#include "l2sw/write_ctrl.hpp"

namespace l2sw {

struct SwitchConfig {
  std::size_t ports = 4;
  std::size_t blocks = 64;
  std::size_t block_payload = 63;
  std::size_t voq_depth = 16;
  std::size_t learn_entries = 16;
  unsigned counter_bits = 2;
  std::size_t cdc_depth = 16;
  std::size_t cdc_latency = 2;  // switch cycles
  std::size_t clock_ratio = 4;  // switch cycles per GMII cycle
  bool fix_flood_leak = false;
  std::uint64_t max_cycles = 20'000'000;

  /// Throws InputError on an unusable configuration.
  void validate() const;
};

struct PortStats {
  std::uint64_t rx_frames = 0;
  std::uint64_t rx_crc_drops = 0;
  std::uint64_t rx_backpressure_corruptions = 0;
  std::uint64_t rx_gmii_errors = 0;
  std::uint64_t rx_runts = 0;
  std::uint64_t tx_frames = 0;
  std::uint64_t voq_drops = 0;
};

struct SwitchStats {
  std::vector<PortStats> ports;
  std::uint64_t floods = 0;
  std::uint64_t unicasts = 0;
  std::uint64_t learns = 0;
  std::uint64_t evictions = 0;
  std::uint64_t flood_voq_drops = 0;
  std::uint64_t leaked_blocks = 0;
  std::size_t free_list_low_watermark = 0;
  std::size_t final_free_blocks = 0;
  std::uint64_t wr_active_cycles = 0;
  std::uint64_t wr_stall_cycles = 0;
  double wr_stall_cycle_fraction = 0.0;
  std::uint64_t cycles = 0;
  bool truncated = false;
};

/// A frame presented to an ingress port.
struct IngressFrame {
  PortId port = 0;
  std::uint64_t start_gmii_cycle = 0;
  EthernetFrame frame;
  bool corrupt_fcs = false;
};

/// A frame observed on an egress GMII bus. `body` excludes preamble and SFD.
struct EgressFrame {
  PortId port = 0;
  std::uint64_t first_gmii_cycle = 0;
  Bytes body;
  bool preamble_ok = false;

  friend bool operator==(const EgressFrame&, const EgressFrame&) = default;
};

/// Observable state after one switch cycle.
struct CycleRecord {
  std::uint64_t cycle = 0;
  bool gmii_boundary = false;
  std::vector<GmiiSymbol> tx;    // per port, meaningful on GMII boundaries
  std::vector<bool> wr_ready;    // per port
  std::size_t free_blocks = 0;
  std::size_t egress_completed = 0;  // frames that finished on the GMII side
};

/// Idealised clock-domain crossing: each symbol becomes visible a fixed
/// number of switch cycles after it is written. The reader may stall; a
/// write into a full queue first evicts the oldest entry.
class CdcQueue {
 public:
  CdcQueue(std::size_t capacity, std::size_t latency) : capacity_(capacity), latency_(latency) {}

  /// Returns the evicted entry when the queue was full.
  std::optional<GmiiSymbol> push(const GmiiSymbol& s, std::uint64_t now);
  std::optional<GmiiSymbol> pop(std::uint64_t now);
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }

 private:
  std::size_t capacity_;
  std::size_t latency_;
  std::deque<std::pair<std::uint64_t, GmiiSymbol>> entries_;
};

/// Cycle-level model of the whole switch. Every call to step() advances one
/// switch cycle through a fixed phase order:
///
///   1. ingress GMII sampling into the CDC queues (GMII boundaries only)
///   2. grants for SRAM write/read, allocation, release and table ports,
///      computed from requests posted in earlier cycles
///   3. RX parsers (an RX whose write controller is not ready leaves its
///      CDC queue alone; only an overflowing symbol is forced through)
///   4. write controllers, SRAM write issue
///   5. learn / lookup / route
///   6. VOQs
///   7. read controllers, SRAM read issue and return
///   8. TX and egress GMII drain
///   9. clock edge: SRAM ports and free-list pushes commit
///  10. block conservation audit
///
/// Audits throw InvariantViolation; they never fire on valid input.
class SwitchCore {
 public:
  /// `trace` must already satisfy the per-port gap rule.
  SwitchCore(SwitchConfig config, const std::vector<IngressFrame>& trace);

  CycleRecord step();

  /// Trace fully consumed and nothing in flight anywhere.
  bool quiescent() const;

  std::uint64_t cycle() const { return cycle_; }
  const SwitchConfig& config() const { return config_; }
  const FreeList& free_list() const { return free_list_; }
  const BlockStore& memory() const { return sram_; }
  const LearnTable& learn_table() const { return table_; }
  const Voq& voq(PortId p) const { return voqs_.at(p); }
  const std::vector<EgressFrame>& egress() const { return egress_; }
  /// Stats as of now, including derived fields.
  SwitchStats stats() const;

  /// Checks that every block is in exactly one place: the free stack, a
  /// positive refcount, or a controller / pending route. Throws on failure.
  void audit() const;

  /// Blocks owned by write controllers or awaiting a routing decision.
  std::size_t held_block_count() const;

 private:
  struct PendingRoute {
    FrameDone frame;
    MacAddress dst;
  };
  struct EgressMonitor {
    bool active = false;
    std::uint64_t first_cycle = 0;
    Bytes bytes;
  };

  void observe_egress(PortId p, const GmiiSymbol& s, std::uint64_t gmii_cycle);
  void handle_route(PortId ingress);
  void handle_voq_drop(const std::vector<BlockIndex>& blocks, bool& leak_counted);

  SwitchConfig config_;
  std::size_t ports_;
  std::uint64_t cycle_ = 0;
  std::uint64_t last_ingress_gmii_ = 0;

  std::vector<std::vector<GmiiSymbol>> ingress_;
  std::vector<CdcQueue> cdc_;
  std::vector<RxParser> rx_;
  std::vector<WriteController> wr_;
  std::vector<ReadController> rd_;
  std::vector<Voq> voqs_;
  std::vector<Tx> tx_;
  BlockStore sram_;
  FreeList free_list_;
  LearnTable table_;

  RoundRobin write_arb_;
  RoundRobin read_arb_;
  RoundRobin release_arb_;
  RoundRobin table_arb_;
  AllocQueue alloc_queue_;

  // registered signals, posted in one cycle and consumed in the next
  std::vector<bool> wr_ready_;
  std::vector<bool> alloc_posted_;
  std::vector<bool> tx_voq_ready_;
  std::vector<std::optional<ReadStart>> read_start_;
  std::vector<bool> read_pull_;
  std::optional<PortId> read_issuer_;

  std::vector<MacAddress> frame_dst_;
  std::vector<std::optional<MacAddress>> learn_pending_;
  std::vector<std::optional<PendingRoute>> route_pending_;
  std::deque<BlockIndex> fixer_queue_;

  // routing output of the current cycle, consumed by the VOQ phase
  std::vector<std::optional<VoqEntry>> voq_push_;
  std::optional<RouteDecision> routed_;
  std::vector<BlockIndex> routed_blocks_;

  std::vector<EgressMonitor> monitors_;
  std::vector<bool> last_pushed_dv_;
  std::vector<std::optional<GmiiSymbol>> cdc_overflow_;
  std::vector<EgressFrame> egress_;
  SwitchStats stats_;
};

struct RunResult {
  std::vector<EgressFrame> egress;
  SwitchStats stats;
};

/// Steps a fresh core until quiescence or config.max_cycles.
RunResult run(const SwitchConfig& config, const std::vector<IngressFrame>& trace);

}  // namespace l2sw
