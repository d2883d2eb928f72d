#include "l2sw/frame.hpp"

#include <algorithm>
#include <numeric>

#include "l2sw/error.hpp"

namespace l2sw {

namespace {

constexpr std::uint32_t kReflectedPoly = 0xEDB88320u;

constexpr std::array<std::uint32_t, 256> make_crc_table() {
  std::array<std::uint32_t, 256> table{};
  for (std::uint32_t i = 0; i < 256; ++i) {
    std::uint32_t c = i;
    for (int k = 0; k < 8; ++k) c = (c & 1u) ? (c >> 1) ^ kReflectedPoly : c >> 1;
    table[i] = c;
  }
  return table;
}

constexpr auto kCrcTable = make_crc_table();

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

constexpr char kHexDigits[] = "0123456789abcdef";

}  // namespace

MacAddress MacAddress::parse(std::string_view text) {
  // six pairs and five separators
  if (text.size() != 17) throw InputError("bad MAC address '" + std::string(text) + "'");
  std::array<Byte, kMacLen> octets{};
  for (std::size_t i = 0; i < kMacLen; ++i) {
    const std::size_t at = i * 3;
    const int hi = hex_value(text[at]);
    const int lo = hex_value(text[at + 1]);
    if (hi < 0 || lo < 0 || (i + 1 < kMacLen && text[at + 2] != ':')) {
      throw InputError("bad MAC address '" + std::string(text) + "'");
    }
    octets[i] = static_cast<Byte>(hi << 4 | lo);
  }
  return MacAddress(octets);
}

std::string MacAddress::to_string() const {
  std::string out;
  out.reserve(17);
  for (std::size_t i = 0; i < kMacLen; ++i) {
    if (i) out.push_back(':');
    out.push_back(kHexDigits[octets_[i] >> 4]);
    out.push_back(kHexDigits[octets_[i] & 0xF]);
  }
  return out;
}

void Crc32::update(Byte b) { state_ = kCrcTable[(state_ ^ b) & 0xFFu] ^ (state_ >> 8); }

void Crc32::update(std::span<const Byte> bytes) {
  for (Byte b : bytes) update(b);
}

std::uint32_t crc32(std::span<const Byte> bytes) {
  Crc32 crc;
  crc.update(bytes);
  return crc.value();
}

Bytes frame_header_and_payload(const EthernetFrame& frame) {
  Bytes out;
  out.reserve(kHeaderLen + frame.payload.size());
  out.insert(out.end(), frame.dst.octets().begin(), frame.dst.octets().end());
  out.insert(out.end(), frame.src.octets().begin(), frame.src.octets().end());
  out.push_back(static_cast<Byte>(frame.ethertype >> 8));
  out.push_back(static_cast<Byte>(frame.ethertype & 0xFF));
  out.insert(out.end(), frame.payload.begin(), frame.payload.end());
  return out;
}

Bytes frame_body(const EthernetFrame& frame, bool corrupt_fcs) {
  if (frame.payload.size() > kMaxPayload) {
    throw InputError("payload of " + std::to_string(frame.payload.size()) +
                     " bytes exceeds 1500");
  }
  Bytes body = frame_header_and_payload(frame);
  const std::uint32_t fcs = crc32(body);
  for (int i = 0; i < 4; ++i) body.push_back(static_cast<Byte>(fcs >> (8 * i)));
  if (corrupt_fcs) body[body.size() - kFcsLen] ^= 0x01;
  return body;
}

Bytes serialize_frame(const EthernetFrame& frame, bool corrupt_fcs) {
  Bytes body = frame_body(frame, corrupt_fcs);
  Bytes out(kPreambleLen, kPreambleByte);
  out.reserve(kPreambleAndSfdLen + body.size());
  out.push_back(kSfdByte);
  out.insert(out.end(), body.begin(), body.end());
  return out;
}

ParsedFrame parse_frame(std::span<const Byte> body) {
  if (body.size() < kMinBodyLen) {
    throw RuntFrameError("runt frame: body of " + std::to_string(body.size()) +
                         " bytes is shorter than 18");
  }
  ParsedFrame parsed;
  EthernetFrame& f = parsed.frame;
  std::array<Byte, kMacLen> mac{};
  std::copy_n(body.begin(), kMacLen, mac.begin());
  f.dst = MacAddress(mac);
  std::copy_n(body.begin() + kMacLen, kMacLen, mac.begin());
  f.src = MacAddress(mac);
  f.ethertype = static_cast<std::uint16_t>(body[12] << 8 | body[13]);
  const std::size_t covered = body.size() - kFcsLen;
  f.payload.assign(body.begin() + kHeaderLen, body.begin() + covered);
  std::copy_n(body.begin() + covered, kFcsLen, parsed.fcs.begin());

  std::uint32_t wire_fcs = 0;
  for (std::size_t i = 0; i < kFcsLen; ++i) wire_fcs |= std::uint32_t{parsed.fcs[i]} << (8 * i);
  parsed.fcs_ok = crc32(body.first(covered)) == wire_fcs;
  return parsed;
}

std::vector<GmiiSymbol> to_gmii_stream(std::span<const ScheduledFrame> frames) {
  std::vector<std::size_t> order(frames.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return frames[a].start_cycle < frames[b].start_cycle;
  });

  std::vector<GmiiSymbol> stream;
  bool first = true;
  std::uint64_t prev_end = 0;  // one past the last dv cycle
  for (std::size_t i : order) {
    const ScheduledFrame& sf = frames[i];
    if (!first) {
      if (sf.start_cycle < prev_end) {
        throw InputError("frame at GMII cycle " + std::to_string(sf.start_cycle) +
                         " overlaps the previous frame");
      }
      if (sf.start_cycle - prev_end < kInterFrameGap) {
        throw InputError("frame at GMII cycle " + std::to_string(sf.start_cycle) + " leaves a " +
                         std::to_string(sf.start_cycle - prev_end) +
                         "-cycle gap; at least 12 idle cycles are required");
      }
    }
    const Bytes wire = serialize_frame(sf.frame, sf.corrupt_fcs);
    stream.resize(sf.start_cycle);
    for (Byte b : wire) stream.push_back(GmiiSymbol{b, true, false});
    prev_end = stream.size();
    first = false;
  }
  return stream;
}

std::string to_hex(std::span<const Byte> bytes) {
  std::string out;
  out.reserve(bytes.size() * 2);
  for (Byte b : bytes) {
    out.push_back(kHexDigits[b >> 4]);
    out.push_back(kHexDigits[b & 0xF]);
  }
  return out;
}

Bytes from_hex(std::string_view hex) {
  if (hex.size() % 2 != 0) throw InputError("hex string has odd length");
  Bytes out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const int hi = hex_value(hex[2 * i]);
    const int lo = hex_value(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) throw InputError("invalid hex digit in '" + std::string(hex) + "'");
    out[i] = static_cast<Byte>(hi << 4 | lo);
  }
  return out;
}

}  // namespace l2sw
