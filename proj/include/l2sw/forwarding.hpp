#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "l2sw/block_store.hpp"
#include "l2sw/frame.hpp"
#include "l2sw/voq.hpp"

namespace l2sw {

using PortId = std::size_t;

struct LearnTableEntry {
  bool valid = false;
  MacAddress mac;
  PortId port = 0;
  unsigned counter = 0;

  friend bool operator==(const LearnTableEntry&, const LearnTableEntry&) = default;
};

enum class LearnKind { Updated, Inserted, Evicted };

struct LearnOutcome {
  LearnKind kind = LearnKind::Inserted;
  std::size_t slot = 0;
  std::optional<MacAddress> evicted;
};

/// Fully associative source-address table with saturating hit counters.
///
/// New entries start at 1. A lookup hit bumps the hit entry and decrements
/// every other valid entry; a miss changes nothing. When full, the entry with
/// the lowest counter (lowest slot on ties) is replaced.
class LearnTable {
 public:
  explicit LearnTable(std::size_t entries = 16, unsigned counter_bits = 2);

  LearnOutcome learn(const MacAddress& src, PortId ingress_port);
  std::optional<PortId> lookup(const MacAddress& dst);

  std::span<const LearnTableEntry> entries() const { return entries_; }
  unsigned counter_max() const { return counter_max_; }
  std::size_t valid_count() const;

 private:
  std::vector<LearnTableEntry> entries_;
  unsigned counter_max_;
};

enum class RouteKind { Unicast, Flood };

struct RouteDecision {
  RouteKind kind = RouteKind::Flood;
  PortId port = 0;  // unicast target
  BlockIndex start;
  std::size_t length = 0;
  std::vector<PortId> targets;
  unsigned refcount = 0;  // consumers per block

  VoqEntry entry() const { return VoqEntry{start, kind == RouteKind::Flood, length}; }
};

/// Maps a committed frame to egress queues. A hit goes to the learned port,
/// even when that is the ingress port; a miss floods every other port.
RouteDecision route(BlockIndex start, std::size_t length, PortId ingress_port,
                    std::optional<PortId> hit, std::size_t ports);

}  // namespace l2sw
