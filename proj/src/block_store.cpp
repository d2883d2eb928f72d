#include "l2sw/block_store.hpp"

#include <algorithm>
#include <string>

#include "l2sw/error.hpp"

namespace l2sw {

std::uint8_t encode_footer(BlockFooter footer) {
  if (footer.next.value >= kMaxBlocks) {
    throw InvariantViolation("footer next index " + std::to_string(footer.next.value) +
                             " does not fit in 6 bits");
  }
  return static_cast<std::uint8_t>(footer.next.value | (footer.eop ? 0x40 : 0x00));
}

BlockFooter decode_footer(std::uint8_t raw) {
  return BlockFooter{BlockIndex{static_cast<std::uint8_t>(raw & 0x3F)}, (raw & 0x40) != 0};
}

void BlockGeometry::validate() const {
  if (blocks < 2 || blocks > kMaxBlocks) {
    throw InputError("block count must be within 2..64, got " + std::to_string(blocks));
  }
  if (payload_bytes < 1) throw InputError("block payload must be at least one byte");
}

BlockStore::BlockStore(BlockGeometry geometry)
    : geometry_(geometry), raw_((geometry.validate(), geometry.blocks * geometry.block_bytes()), 0) {}

void BlockStore::check_index(BlockIndex idx) const {
  if (idx.value >= geometry_.blocks) {
    throw InvariantViolation("block index " + std::to_string(idx.value) + " out of range");
  }
}

void BlockStore::write_block(BlockIndex idx, const MemoryBlock& block) {
  check_index(idx);
  if (pending_write_) throw InvariantViolation("two SRAM writes in one cycle");
  if (block.payload.size() > geometry_.payload_bytes) {
    throw InvariantViolation("block payload larger than the block");
  }
  Bytes image(geometry_.block_bytes(), 0);
  std::copy(block.payload.begin(), block.payload.end(), image.begin());
  image.back() = encode_footer(block.footer);
  pending_write_.emplace(idx, std::move(image));
}

void BlockStore::read_block(BlockIndex idx) {
  check_index(idx);
  if (pending_read_) throw InvariantViolation("two SRAM reads in one cycle");
  pending_read_ = idx;
}

void BlockStore::clock() {
  read_data_.reset();
  if (pending_read_) {
    read_data_ = peek(*pending_read_);
    pending_read_.reset();
    ++reads_;
  }
  if (pending_write_) {
    const auto& [idx, image] = *pending_write_;
    std::copy(image.begin(), image.end(), raw_.begin() + idx.value * geometry_.block_bytes());
    pending_write_.reset();
    ++writes_;
  }
}

MemoryBlock BlockStore::peek(BlockIndex idx) const {
  check_index(idx);
  const auto first = raw_.begin() + idx.value * geometry_.block_bytes();
  MemoryBlock block;
  block.payload.assign(first, first + geometry_.payload_bytes);
  block.footer = decode_footer(*(first + geometry_.payload_bytes));
  return block;
}

}  // namespace l2sw
