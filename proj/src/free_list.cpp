#include "l2sw/free_list.hpp"

#include <string>

#include "l2sw/error.hpp"

namespace l2sw {

FreeList::FreeList(std::size_t blocks, unsigned max_refcount)
    : refcount_(blocks, 0), on_stack_(blocks, true), max_refcount_(max_refcount) {
  if (blocks == 0 || blocks > kMaxBlocks) throw InputError("free list size must be within 1..64");
  // pushed high to low so block 0 is allocated first
  stack_.reserve(blocks);
  for (std::size_t i = blocks; i-- > 0;) stack_.push_back(BlockIndex{static_cast<std::uint8_t>(i)});
}

void FreeList::check_index(BlockIndex idx) const {
  if (idx.value >= refcount_.size()) {
    throw InvariantViolation("block index " + std::to_string(idx.value) + " out of range");
  }
}

std::optional<BlockIndex> FreeList::allocate() {
  if (allocated_this_cycle_) throw InvariantViolation("two free-list allocations in one cycle");
  allocated_this_cycle_ = true;
  if (stack_.empty()) return std::nullopt;
  const BlockIndex idx = stack_.back();
  stack_.pop_back();
  on_stack_[idx.value] = false;
  return idx;
}

void FreeList::set_refcount(BlockIndex idx, unsigned count) {
  check_index(idx);
  if (count == 0 || count > max_refcount_) {
    throw InvariantViolation("refcount " + std::to_string(count) + " outside 1.." +
                             std::to_string(max_refcount_));
  }
  if (on_stack_[idx.value]) {
    throw InvariantViolation("set_refcount on free block " + std::to_string(idx.value));
  }
  if (refcount_[idx.value] != 0) {
    throw InvariantViolation("refcount of block " + std::to_string(idx.value) + " set twice");
  }
  refcount_[idx.value] = count;
}

bool FreeList::release(BlockIndex idx) {
  check_index(idx);
  if (released_this_cycle_) throw InvariantViolation("two free-list releases in one cycle");
  released_this_cycle_ = true;
  if (refcount_[idx.value] == 0) {
    throw InvariantViolation("double free of block " + std::to_string(idx.value));
  }
  if (--refcount_[idx.value] != 0) return false;
  pending_.push_back(idx);
  return true;
}

void FreeList::commit() {
  for (BlockIndex idx : pending_) {
    if (on_stack_[idx.value]) {
      throw InvariantViolation("block " + std::to_string(idx.value) + " pushed twice");
    }
    on_stack_[idx.value] = true;
    stack_.push_back(idx);
  }
  pending_.clear();
  allocated_this_cycle_ = false;
  released_this_cycle_ = false;
}

}  // namespace l2sw
