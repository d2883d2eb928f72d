#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "l2sw/frame.hpp"

namespace l2sw {

struct BlockIndex {
  std::uint8_t value = 0;

  friend constexpr auto operator<=>(BlockIndex, BlockIndex) = default;
};

inline constexpr std::size_t kFooterIndexBits = 6;
inline constexpr std::size_t kMaxBlocks = std::size_t{1} << kFooterIndexBits;

struct BlockFooter {
  BlockIndex next;
  bool eop = false;

  friend constexpr bool operator==(BlockFooter, BlockFooter) = default;
};

/// bits 0..5 next index, bit 6 eop, bit 7 zero.
std::uint8_t encode_footer(BlockFooter footer);
BlockFooter decode_footer(std::uint8_t raw);

struct MemoryBlock {
  Bytes payload;
  BlockFooter footer;

  friend bool operator==(const MemoryBlock&, const MemoryBlock&) = default;
};

struct BlockGeometry {
  std::size_t blocks = 64;
  std::size_t payload_bytes = 63;

  std::size_t block_bytes() const { return payload_bytes + 1; }
  /// Throws InputError unless 2 <= blocks <= 64 and payload_bytes >= 1.
  void validate() const;
};

/// Shared packet SRAM: one write port and one read port, each with a single
/// cycle of latency. Requests are registered during a cycle and take effect
/// at `clock()`; the read samples memory before the same-cycle write lands.
class BlockStore {
 public:
  explicit BlockStore(BlockGeometry geometry = {});

  /// Schedules a write for this cycle. A second write in one cycle throws.
  void write_block(BlockIndex idx, const MemoryBlock& block);
  /// Issues a read for this cycle; data appears in read_data() after clock().
  void read_block(BlockIndex idx);
  /// Data returned by the read issued in the previous cycle, if any.
  const std::optional<MemoryBlock>& read_data() const { return read_data_; }

  /// Clock edge.
  void clock();

  /// Direct view of stored contents, bypassing the ports. For audits and tests.
  MemoryBlock peek(BlockIndex idx) const;

  const BlockGeometry& geometry() const { return geometry_; }
  std::uint64_t writes() const { return writes_; }
  std::uint64_t reads() const { return reads_; }

 private:
  void check_index(BlockIndex idx) const;

  BlockGeometry geometry_;
  Bytes raw_;
  std::optional<std::pair<BlockIndex, Bytes>> pending_write_;
  std::optional<BlockIndex> pending_read_;
  std::optional<MemoryBlock> read_data_;
  std::uint64_t writes_ = 0;
  std::uint64_t reads_ = 0;
};

}  // namespace l2sw
