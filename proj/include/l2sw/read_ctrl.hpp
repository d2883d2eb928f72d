#pragma once

#include <cstddef>
#include <deque>
#include <optional>

#include "l2sw/block_store.hpp"

namespace l2sw {

enum class ReadMode { Idle, Fetch, Deliver };

struct ReadStart {
  BlockIndex start;
  bool flood = false;
};

struct DeliveredBlock {
  MemoryBlock block;
  bool last = false;
};

struct ReadCtrlInputs {
  std::optional<ReadStart> start;
  bool pull = false;  // TX has drained the previous block
  bool mem_read_grant = false;
  std::optional<MemoryBlock> mem_read_data;
  bool free_grant = false;
};

struct ReadCtrlOutputs {
  std::optional<BlockIndex> issue_read;  // SRAM read to issue this cycle
  std::optional<DeliveredBlock> block_out;
};

/// Per-port chain walker: fetches one block at a time on TX demand, hands it
/// over with `last` = eop, and queues a release for every delivered block.
/// Returns to Idle once the eop block is delivered and all releases granted.
class ReadController {
 public:
  explicit ReadController(std::size_t blocks = 64) : blocks_(blocks) {}

  ReadCtrlOutputs tick(const ReadCtrlInputs& in);

  std::optional<BlockIndex> read_request() const;
  std::optional<BlockIndex> free_request() const;

  ReadMode mode() const { return mode_; }
  bool flood() const { return flood_; }
  bool quiescent() const { return mode_ == ReadMode::Idle; }

 private:
  std::size_t blocks_;
  ReadMode mode_ = ReadMode::Idle;
  BlockIndex cursor_;
  bool flood_ = false;
  bool in_flight_ = false;
  bool done_ = false;
  std::size_t hops_ = 0;
  std::deque<BlockIndex> free_queue_;
};

}  // namespace l2sw
