#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "l2sw/block_store.hpp"

namespace l2sw {

/// Stack of free block indices plus a reference counter per block.
///
/// One allocation and one release per cycle. A release that drops a counter
/// to zero queues the block, which only reaches the stack at `commit()`, so a
/// block freed in cycle t can first be allocated in cycle t+1.
class FreeList {
 public:
  explicit FreeList(std::size_t blocks = 64, unsigned max_refcount = 4);

  /// Pops the top of the stack, or nothing when empty.
  std::optional<BlockIndex> allocate();

  /// Sets the consumer count of an owned block whose counter is still zero.
  void set_refcount(BlockIndex idx, unsigned count);

  /// Drops one reference. Returns true when that was the last one.
  bool release(BlockIndex idx);

  /// Clock edge: completed releases land on the stack; port usage resets.
  void commit();

  std::size_t free_count() const { return stack_.size(); }
  bool empty() const { return stack_.empty(); }
  std::size_t blocks() const { return refcount_.size(); }
  unsigned refcount(BlockIndex idx) const { return refcount_.at(idx.value); }
  unsigned max_refcount() const { return max_refcount_; }
  /// Bottom to top; the back is the next allocation.
  std::span<const BlockIndex> stack() const { return stack_; }
  std::span<const BlockIndex> pending_frees() const { return pending_; }

 private:
  void check_index(BlockIndex idx) const;

  std::vector<BlockIndex> stack_;
  std::vector<unsigned> refcount_;
  std::vector<bool> on_stack_;
  std::vector<BlockIndex> pending_;
  unsigned max_refcount_;
  bool allocated_this_cycle_ = false;
  bool released_this_cycle_ = false;
};

}  // namespace l2sw
