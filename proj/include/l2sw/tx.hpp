#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>

#include "l2sw/frame.hpp"
#include "l2sw/read_ctrl.hpp"
#include "l2sw/voq.hpp"

namespace l2sw {

enum class TxMode { Idle, WaitFirstBlock, Preamble, Body, Gap };

struct TxInputs {
  std::optional<VoqEntry> popped;
  std::optional<DeliveredBlock> block;
};

struct TxOutputs {
  std::optional<ReadStart> start_read;
  bool pull = false;
};

/// Per-port egress FSM. Takes one frame pointer from its VOQ, waits for the
/// first block before emitting any preamble, then streams exactly `length`
/// body bytes into a small CDC queue drained at one byte per GMII cycle.
/// Once the frame drains, 12 idle GMII cycles pass before the next pop.
class Tx {
 public:
  explicit Tx(std::size_t payload_bytes = 63, std::size_t out_queue_capacity = 16,
              std::size_t gap = kInterFrameGap);

  /// Registered VOQ ready bit.
  bool voq_ready() const { return mode_ == TxMode::Idle; }

  TxOutputs tick(const TxInputs& in);

  /// One GMII cycle on the egress side. Running dry inside a frame throws.
  GmiiSymbol drain();

  TxMode mode() const { return mode_; }
  std::size_t queued() const { return out_queue_.size(); }
  bool quiescent() const { return mode_ == TxMode::Idle && out_queue_.empty(); }

 private:
  std::size_t payload_bytes_;
  std::size_t capacity_;
  std::size_t gap_;
  TxMode mode_ = TxMode::Idle;
  std::size_t remaining_ = 0;
  std::size_t preamble_sent_ = 0;
  std::size_t gap_count_ = 0;
  std::optional<DeliveredBlock> block_;
  std::size_t block_pos_ = 0;
  bool streaming_ = false;
  std::deque<Byte> out_queue_;
};

}  // namespace l2sw
