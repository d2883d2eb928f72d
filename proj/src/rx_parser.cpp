#include "l2sw/rx_parser.hpp"

#include <algorithm>

namespace l2sw {

RxOutput RxParser::tick(std::optional<GmiiSymbol> sample, bool wr_ready) {
  RxOutput out;
  if (!sample) return out;
  if (!sample->dv) {
    if (frame_active()) {
      finish_frame(out);
    } else {
      mode_ = RxMode::Idle;
      header_count_ = 0;
    }
    return out;
  }
  if (frame_active()) {
    frame_byte(*sample, wr_ready, out);
  } else {
    hunt(sample->data);
  }
  return out;
}

void RxParser::hunt(Byte b) {
  if (b == kPreambleByte) {
    header_count_ = std::min(header_count_ + 1, static_cast<int>(kPreambleLen));
    mode_ = RxMode::Preamble;
  } else if (b == kSfdByte && header_count_ == static_cast<int>(kPreambleLen)) {
    header_count_ = static_cast<int>(kPreambleAndSfdLen);
    mode_ = RxMode::Dest;
    crc_.reset();
    tail_len_ = tail_head_ = body_len_ = 0;
    pending_sof_ = true;
    dropped_ = gmii_error_ = false;
  } else {
    header_count_ = 0;
    mode_ = RxMode::Idle;
  }
}

void RxParser::frame_byte(const GmiiSymbol& s, bool wr_ready, RxOutput& out) {
  const Byte b = s.data;
  if (s.er) gmii_error_ = true;

  // CRC trails the input by four bytes so the FCS never enters it.
  if (tail_len_ < kFcsLen) {
    tail_[tail_len_++] = b;
  } else {
    crc_.update(tail_[tail_head_]);
    tail_[tail_head_] = b;
    tail_head_ = (tail_head_ + 1) % kFcsLen;
  }

  const std::size_t pos = body_len_++;
  if (pos < kMacLen) {
    dst_[pos] = b;
    if (pos + 1 == kMacLen) {
      out.dst_ready = true;
      out.dst = MacAddress(dst_);
      mode_ = RxMode::Src;
    }
  } else if (pos < 2 * kMacLen) {
    src_[pos - kMacLen] = b;
    if (pos + 1 == 2 * kMacLen) {
      out.src_ready = true;
      out.src = MacAddress(src_);
      mode_ = RxMode::Body;
    }
  }

  if (wr_ready) {
    out.byte_valid = true;
    out.byte = b;
    out.sof = pending_sof_;
    pending_sof_ = false;
  } else {
    dropped_ = true;
    ++counters_.dropped_bytes;
  }
}

void RxParser::finish_frame(RxOutput& out) {
  out.eof = true;
  ++counters_.frames;
  bool crc_bad = true;
  if (body_len_ >= kMinBodyLen) {
    std::uint32_t fcs = 0;
    for (std::size_t i = 0; i < kFcsLen; ++i) {
      fcs |= std::uint32_t{tail_[(tail_head_ + i) % kFcsLen]} << (8 * i);
    }
    crc_bad = crc_.value() != fcs;
  } else {
    ++counters_.runts;
  }
  if (dropped_) ++counters_.backpressure_frames;
  if (gmii_error_) ++counters_.gmii_error_frames;
  if (crc_bad && !dropped_ && !gmii_error_ && body_len_ >= kMinBodyLen) ++counters_.crc_errors;

  out.error = crc_bad || dropped_ || gmii_error_;
  mode_ = RxMode::Idle;
  header_count_ = 0;
}

}  // namespace l2sw
