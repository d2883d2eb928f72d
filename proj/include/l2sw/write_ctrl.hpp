#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include "l2sw/block_store.hpp"
#include "l2sw/rx_parser.hpp"

namespace l2sw {

enum class WriteMode { Idle, WritePayload, Wait, Footer };

struct BlockWrite {
  BlockIndex idx;
  MemoryBlock block;
};

/// A frame leaving the write side, either committed to memory or aborted.
struct FrameDone {
  std::vector<BlockIndex> blocks;  // chain order; may be empty when aborted
  std::size_t length = 0;          // body bytes accepted, FCS included
  bool error = false;

  BlockIndex start() const { return blocks.front(); }
};

struct WriteCtrlInputs {
  RxOutput rx;
  std::optional<BlockIndex> alloc_grant;
  bool mem_write_grant = false;
  bool release_grant = false;
};

struct WriteCtrlOutputs {
  bool ready = true;
  bool alloc_request = false;  // joins the allocation queue next cycle
  bool cancel_alloc = false;   // withdraw queued allocation requests
  std::optional<FrameDone> frame_done;
  /// Blocks given back this cycle. The owner of the free list sets their
  /// refcount to 1; they then drain through release_request().
  std::vector<BlockIndex> surrendered;
};

/// Per-port memory write FSM (IDLE, WRITE PAYLOAD, WAIT, FOOTER).
///
/// Coalesces ingress bytes into block payloads while holding a current and a
/// next allocation so each footer can name its successor. A full block waits
/// for the next byte (kept as a one-byte carry) or EOF before its footer is
/// written, so a frame never ends in an empty block. The last block's next
/// pointer refers to itself.
class WriteController {
 public:
  explicit WriteController(std::size_t payload_bytes = 63);

  WriteCtrlOutputs tick(const WriteCtrlInputs& in);

  /// Footer write waiting for the SRAM write port.
  const std::optional<BlockWrite>& write_request() const { return pending_write_; }
  std::optional<BlockIndex> release_request() const;

  WriteMode mode() const { return mode_; }
  bool ready() const { return mode_ != WriteMode::Wait && mode_ != WriteMode::Footer; }
  bool quiescent() const { return mode_ == WriteMode::Idle && release_queue_.empty(); }
  /// Blocks owned with a zero refcount: current, next and the frame's chain.
  std::vector<BlockIndex> held_blocks() const;

  std::uint64_t active_cycles() const { return active_cycles_; }
  std::uint64_t stall_cycles() const { return stall_cycles_; }

 private:
  std::size_t blocks_needed() const;
  void start_frame();
  void accept_byte(Byte b);
  void begin_flush(bool eop);
  void try_flush();
  void complete_write(WriteCtrlOutputs& out);
  void abort_frame(WriteCtrlOutputs& out);
  void finish_frame(WriteCtrlOutputs& out);
  void surrender(BlockIndex idx, WriteCtrlOutputs& out);

  std::size_t payload_bytes_;
  WriteMode mode_ = WriteMode::Idle;
  Bytes buffer_;
  std::size_t fill_ = 0;
  std::optional<Byte> carry_;
  std::optional<BlockIndex> current_;
  std::optional<BlockIndex> next_;
  std::vector<BlockIndex> chain_;
  std::size_t length_ = 0;
  bool pending_eop_ = false;
  bool eof_pending_ = false;
  unsigned alloc_outstanding_ = 0;
  std::optional<BlockWrite> pending_write_;
  std::deque<BlockIndex> release_queue_;
  std::uint64_t active_cycles_ = 0;
  std::uint64_t stall_cycles_ = 0;
};

}  // namespace l2sw
