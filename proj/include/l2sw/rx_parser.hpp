#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>

#include "l2sw/frame.hpp"

namespace l2sw {

enum class RxMode { Idle, Preamble, Dest, Src, Body };

/// What the parser hands to the write controller and the learn logic in one
/// switch cycle. `eof`/`error` may fire without a byte; `error` only with `eof`.
struct RxOutput {
  bool byte_valid = false;
  Byte byte = 0;
  bool sof = false;
  bool eof = false;
  bool error = false;
  bool dst_ready = false;
  MacAddress dst;
  bool src_ready = false;
  MacAddress src;
};

struct RxCounters {
  std::uint64_t frames = 0;          // frames that reached EOF
  std::uint64_t crc_errors = 0;      // FCS mismatch on an otherwise clean frame
  std::uint64_t dropped_bytes = 0;   // bytes discarded under back-pressure
  std::uint64_t backpressure_frames = 0;
  std::uint64_t gmii_error_frames = 0;
  std::uint64_t runts = 0;
};

/// Per-port ingress state machine in the switch clock domain.
///
/// Hunts for 7 x 0x55 + 0xD5, then streams every body byte (including the FCS)
/// to memory while a CRC runs four bytes behind the input so that the FCS is
/// never fed into it. Bytes offered while the write controller is not ready
/// are dropped and latch corruption, which forces `error` at EOF.
class RxParser {
 public:
  /// One switch cycle. `sample` is present only when the CDC queue yields a
  /// GMII symbol; a sample with dv low ends an active frame.
  RxOutput tick(std::optional<GmiiSymbol> sample, bool wr_ready);

  RxMode mode() const { return mode_; }
  bool frame_active() const { return mode_ == RxMode::Dest || mode_ == RxMode::Src || mode_ == RxMode::Body; }
  int header_count() const { return header_count_; }
  const RxCounters& counters() const { return counters_; }

 private:
  void hunt(Byte b);
  void frame_byte(const GmiiSymbol& s, bool wr_ready, RxOutput& out);
  void finish_frame(RxOutput& out);

  RxMode mode_ = RxMode::Idle;
  int header_count_ = 0;
  Crc32 crc_;
  std::array<Byte, kFcsLen> tail_{};
  std::size_t tail_len_ = 0;
  std::size_t tail_head_ = 0;  // oldest entry once full
  std::size_t body_len_ = 0;
  std::array<Byte, kMacLen> dst_{};
  std::array<Byte, kMacLen> src_{};
  bool pending_sof_ = false;
  bool dropped_ = false;
  bool gmii_error_ = false;
  RxCounters counters_;
};

}  // namespace l2sw
