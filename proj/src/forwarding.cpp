#include "l2sw/forwarding.hpp"

#include <algorithm>

#include "l2sw/error.hpp"

namespace l2sw {

LearnTable::LearnTable(std::size_t entries, unsigned counter_bits)
    : entries_(entries), counter_max_((1u << counter_bits) - 1) {
  if (entries == 0) throw InputError("learn table needs at least one entry");
  if (counter_bits == 0 || counter_bits > 8) throw InputError("counter width must be 1..8 bits");
}

std::size_t LearnTable::valid_count() const {
  return static_cast<std::size_t>(
      std::count_if(entries_.begin(), entries_.end(), [](const auto& e) { return e.valid; }));
}

LearnOutcome LearnTable::learn(const MacAddress& src, PortId ingress_port) {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    LearnTableEntry& e = entries_[i];
    if (e.valid && e.mac == src) {
      e.port = ingress_port;
      e.counter = std::min(e.counter + 1, counter_max_);
      return {LearnKind::Updated, i, std::nullopt};
    }
  }

  const LearnTableEntry fresh{true, src, ingress_port, std::min(1u, counter_max_)};
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (!entries_[i].valid) {
      entries_[i] = fresh;
      return {LearnKind::Inserted, i, std::nullopt};
    }
  }

  std::size_t victim = 0;
  for (std::size_t i = 1; i < entries_.size(); ++i) {
    if (entries_[i].counter < entries_[victim].counter) victim = i;
  }
  LearnOutcome outcome{LearnKind::Evicted, victim, entries_[victim].mac};
  entries_[victim] = fresh;
  return outcome;
}

std::optional<PortId> LearnTable::lookup(const MacAddress& dst) {
  auto hit = std::find_if(entries_.begin(), entries_.end(),
                          [&](const auto& e) { return e.valid && e.mac == dst; });
  if (hit == entries_.end()) return std::nullopt;
  for (auto& e : entries_) {
    if (!e.valid) continue;
    if (&e == &*hit) {
      e.counter = std::min(e.counter + 1, counter_max_);
    } else if (e.counter > 0) {
      --e.counter;
    }
  }
  return hit->port;
}

RouteDecision route(BlockIndex start, std::size_t length, PortId ingress_port,
                    std::optional<PortId> hit, std::size_t ports) {
  if (ingress_port >= ports) throw InvariantViolation("ingress port out of range");
  RouteDecision d;
  d.start = start;
  d.length = length;
  if (hit) {
    if (*hit >= ports) throw InvariantViolation("learned port out of range");
    d.kind = RouteKind::Unicast;
    d.port = *hit;
    d.targets = {*hit};
    d.refcount = 1;
  } else {
    d.kind = RouteKind::Flood;
    for (PortId p = 0; p < ports; ++p) {
      if (p != ingress_port) d.targets.push_back(p);
    }
    d.refcount = static_cast<unsigned>(ports - 1);
  }
  return d;
}

}  // namespace l2sw
