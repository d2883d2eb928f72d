#include "l2sw/read_ctrl.hpp"

#include <string>

#include "l2sw/error.hpp"

namespace l2sw {

std::optional<BlockIndex> ReadController::read_request() const {
  if (mode_ == ReadMode::Fetch && !in_flight_) return cursor_;
  return std::nullopt;
}

std::optional<BlockIndex> ReadController::free_request() const {
  if (free_queue_.empty()) return std::nullopt;
  return free_queue_.front();
}

ReadCtrlOutputs ReadController::tick(const ReadCtrlInputs& in) {
  ReadCtrlOutputs out;

  if (in.free_grant) {
    if (free_queue_.empty()) throw InvariantViolation("free granted with nothing queued");
    free_queue_.pop_front();
  }

  if (in.mem_read_data) {
    if (!in_flight_) throw InvariantViolation("read data without an issued read");
    in_flight_ = false;
    ++hops_;
    const bool eop = in.mem_read_data->footer.eop;
    out.block_out = DeliveredBlock{*in.mem_read_data, eop};
    free_queue_.push_back(cursor_);
    if (eop) {
      done_ = true;
    } else {
      if (hops_ >= blocks_) {
        throw ChainError("block chain from cursor " + std::to_string(cursor_.value) +
                         " exceeds " + std::to_string(blocks_) + " hops without eop");
      }
      cursor_ = in.mem_read_data->footer.next;
    }
    mode_ = ReadMode::Deliver;
  }

  if (in.start) {
    if (mode_ != ReadMode::Idle) throw InvariantViolation("read start while a frame is active");
    cursor_ = in.start->start;
    flood_ = in.start->flood;
    hops_ = 0;
    done_ = false;
    mode_ = ReadMode::Fetch;
  }

  if (in.pull) {
    if (mode_ != ReadMode::Deliver || done_) throw InvariantViolation("pull with no block left");
    mode_ = ReadMode::Fetch;
  }

  if (in.mem_read_grant) {
    if (mode_ != ReadMode::Fetch || in_flight_) {
      throw InvariantViolation("SRAM read granted without a request");
    }
    out.issue_read = cursor_;
    in_flight_ = true;
  }

  if (mode_ == ReadMode::Deliver && done_ && free_queue_.empty()) mode_ = ReadMode::Idle;
  return out;
}

}  // namespace l2sw
