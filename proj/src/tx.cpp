#include "l2sw/tx.hpp"

#include "l2sw/error.hpp"

namespace l2sw {

Tx::Tx(std::size_t payload_bytes, std::size_t out_queue_capacity, std::size_t gap)
    : payload_bytes_(payload_bytes), capacity_(out_queue_capacity), gap_(gap) {
  if (capacity_ == 0) throw InputError("TX queue depth must be at least 1");
}

TxOutputs Tx::tick(const TxInputs& in) {
  TxOutputs out;

  if (in.popped) {
    if (mode_ != TxMode::Idle) throw InvariantViolation("VOQ popped while TX busy");
    if (in.popped->length == 0) throw InvariantViolation("zero-length VOQ entry");
    remaining_ = in.popped->length;
    mode_ = TxMode::WaitFirstBlock;
    out.start_read = ReadStart{in.popped->start, in.popped->flood};
  }

  if (in.block) {
    if (block_) throw InvariantViolation("block delivered while TX still holds one");
    if (mode_ != TxMode::WaitFirstBlock && mode_ != TxMode::Body) {
      throw InvariantViolation("block delivered to TX outside a frame");
    }
    block_ = in.block;
    block_pos_ = 0;
    if (mode_ == TxMode::WaitFirstBlock) {
      mode_ = TxMode::Preamble;
      preamble_sent_ = 0;
    }
  }

  if (out_queue_.size() >= capacity_) return out;

  if (mode_ == TxMode::Preamble) {
    out_queue_.push_back(preamble_sent_ < kPreambleLen ? kPreambleByte : kSfdByte);
    if (++preamble_sent_ == kPreambleAndSfdLen) mode_ = TxMode::Body;
  } else if (mode_ == TxMode::Body && block_) {
    out_queue_.push_back(block_->block.payload.at(block_pos_++));
    if (--remaining_ == 0) {
      if (!block_->last) throw InvariantViolation("frame length ended before its eop block");
      block_.reset();
      mode_ = TxMode::Gap;
      gap_count_ = 0;
    } else if (block_pos_ == payload_bytes_) {
      if (block_->last) throw InvariantViolation("eop block exhausted before frame length");
      block_.reset();
      out.pull = true;
    }
  }
  return out;
}

GmiiSymbol Tx::drain() {
  if (!out_queue_.empty()) {
    const Byte b = out_queue_.front();
    out_queue_.pop_front();
    streaming_ = true;
    return GmiiSymbol{b, true, false};
  }
  if (mode_ == TxMode::Gap) {
    streaming_ = false;
    if (++gap_count_ >= gap_) mode_ = TxMode::Idle;
  } else if (streaming_) {
    throw InvariantViolation("TX underrun inside a frame");
  }
  return GmiiSymbol{};
}

}  // namespace l2sw
