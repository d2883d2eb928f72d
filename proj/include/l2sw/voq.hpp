#pragma once

#include <cstddef>
#include <deque>
#include <optional>

#include "l2sw/block_store.hpp"

namespace l2sw {

struct VoqEntry {
  BlockIndex start;
  bool flood = false;
  std::size_t length = 0;  // frame body bytes, FCS included

  friend bool operator==(const VoqEntry&, const VoqEntry&) = default;
};

struct VoqTickResult {
  std::optional<VoqEntry> popped;
  bool push_accepted = false;
};

/// Per-egress queue of frame pointers. Supports push and pop in the same
/// cycle both when empty (the pushed entry passes straight through) and when
/// full (head leaves, new entry takes the freed slot). A push to a full queue
/// without a pop is refused.
class Voq {
 public:
  explicit Voq(std::size_t capacity = 16);

  VoqTickResult tick(std::optional<VoqEntry> push, bool pop);

  std::size_t size() const { return entries_.size(); }
  std::size_t capacity() const { return capacity_; }
  bool empty() const { return entries_.empty(); }
  bool full() const { return entries_.size() == capacity_; }
  const std::deque<VoqEntry>& entries() const { return entries_; }

 private:
  std::size_t capacity_;
  std::deque<VoqEntry> entries_;
};

}  // namespace l2sw
