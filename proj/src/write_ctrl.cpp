#include "l2sw/write_ctrl.hpp"

#include <algorithm>

#include "l2sw/error.hpp"

namespace l2sw {

WriteController::WriteController(std::size_t payload_bytes)
    : payload_bytes_(payload_bytes), buffer_(payload_bytes, 0) {}

std::optional<BlockIndex> WriteController::release_request() const {
  if (release_queue_.empty()) return std::nullopt;
  return release_queue_.front();
}

std::vector<BlockIndex> WriteController::held_blocks() const {
  std::vector<BlockIndex> held = chain_;
  if (current_) held.push_back(*current_);
  if (next_) held.push_back(*next_);
  return held;
}

std::size_t WriteController::blocks_needed() const {
  if (mode_ == WriteMode::Idle) return 0;
  if (pending_eop_) return current_ ? 0 : 1;
  return (current_ ? 0 : 1) + (next_ ? 0 : 1);
}

WriteCtrlOutputs WriteController::tick(const WriteCtrlInputs& in) {
  WriteCtrlOutputs out;

  if (in.alloc_grant) {
    if (alloc_outstanding_ == 0 || mode_ == WriteMode::Idle) {
      throw InvariantViolation("allocation granted without an outstanding request");
    }
    alloc_outstanding_ = 0;
    if (!current_) {
      current_ = in.alloc_grant;
    } else if (!next_) {
      next_ = in.alloc_grant;
    } else {
      throw InvariantViolation("allocation granted with current and next already held");
    }
  }

  if (in.release_grant) {
    if (release_queue_.empty()) throw InvariantViolation("release granted with nothing queued");
    release_queue_.pop_front();
  }

  if (in.mem_write_grant) {
    if (!pending_write_) throw InvariantViolation("SRAM write granted without a request");
    complete_write(out);
  }

  const RxOutput& rx = in.rx;
  if (rx.byte_valid) {
    if (rx.sof) {
      if (mode_ != WriteMode::Idle) throw InvariantViolation("SOF in the middle of a frame");
      start_frame();
    } else if (mode_ == WriteMode::Idle) {
      throw InvariantViolation("frame byte without a preceding SOF");
    } else if (mode_ != WriteMode::WritePayload) {
      throw InvariantViolation("byte delivered while the write controller was not ready");
    }
    accept_byte(rx.byte);
  }
  if (rx.eof && mode_ != WriteMode::Idle) {
    if (rx.error) {
      abort_frame(out);
    } else if (mode_ == WriteMode::WritePayload) {
      begin_flush(true);
    } else {
      eof_pending_ = true;
    }
  }

  if (mode_ == WriteMode::Wait) try_flush();

  if (alloc_outstanding_ == 0 && blocks_needed() > 0) {
    out.alloc_request = true;
    alloc_outstanding_ = 1;
  }

  out.ready = ready();
  if (mode_ != WriteMode::Idle) {
    ++active_cycles_;
    if (!out.ready) ++stall_cycles_;
  }
  return out;
}

void WriteController::start_frame() {
  mode_ = WriteMode::WritePayload;
  fill_ = 0;
  length_ = 0;
  pending_eop_ = eof_pending_ = false;
  std::fill(buffer_.begin(), buffer_.end(), Byte{0});
}

void WriteController::accept_byte(Byte b) {
  ++length_;
  if (fill_ < payload_bytes_) {
    buffer_[fill_++] = b;
  } else {
    carry_ = b;
    begin_flush(false);
  }
}

void WriteController::begin_flush(bool eop) {
  pending_eop_ = eop;
  mode_ = WriteMode::Wait;
  try_flush();
}

void WriteController::try_flush() {
  if (!current_ || (!pending_eop_ && !next_)) return;
  MemoryBlock block;
  block.payload = buffer_;
  block.footer = BlockFooter{pending_eop_ ? *current_ : *next_, pending_eop_};
  pending_write_ = BlockWrite{*current_, std::move(block)};
  mode_ = WriteMode::Footer;
}

void WriteController::complete_write(WriteCtrlOutputs& out) {
  chain_.push_back(*current_);
  current_.reset();
  pending_write_.reset();

  if (pending_eop_) {
    out.frame_done = FrameDone{std::move(chain_), length_, false};
    chain_.clear();
    if (next_) surrender(*next_, out);
    next_.reset();
    finish_frame(out);
    return;
  }

  current_ = next_;
  next_.reset();
  std::fill(buffer_.begin(), buffer_.end(), Byte{0});
  fill_ = 0;
  if (carry_) {
    buffer_[fill_++] = *carry_;
    carry_.reset();
  }
  mode_ = WriteMode::WritePayload;
  if (eof_pending_) {
    eof_pending_ = false;
    begin_flush(true);
  }
}

void WriteController::abort_frame(WriteCtrlOutputs& out) {
  out.frame_done = FrameDone{chain_, length_, true};
  for (BlockIndex b : chain_) surrender(b, out);
  if (current_) surrender(*current_, out);
  if (next_) surrender(*next_, out);
  chain_.clear();
  current_.reset();
  next_.reset();
  pending_write_.reset();
  finish_frame(out);
}

void WriteController::finish_frame(WriteCtrlOutputs& out) {
  mode_ = WriteMode::Idle;
  if (alloc_outstanding_ > 0) {
    out.cancel_alloc = true;
    alloc_outstanding_ = 0;
  }
  fill_ = 0;
  length_ = 0;
  carry_.reset();
  pending_eop_ = eof_pending_ = false;
}

void WriteController::surrender(BlockIndex idx, WriteCtrlOutputs& out) {
  out.surrendered.push_back(idx);
  release_queue_.push_back(idx);
}

}  // namespace l2sw
