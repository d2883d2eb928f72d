#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace l2sw {

using Byte = std::uint8_t;
using Bytes = std::vector<Byte>;

inline constexpr std::size_t kMacLen = 6;
inline constexpr std::size_t kEthertypeLen = 2;
inline constexpr std::size_t kHeaderLen = 2 * kMacLen + kEthertypeLen;
inline constexpr std::size_t kFcsLen = 4;
inline constexpr std::size_t kMinBodyLen = kHeaderLen + kFcsLen;  // 18
inline constexpr std::size_t kMaxPayload = 1500;
inline constexpr std::size_t kPreambleLen = 7;
inline constexpr std::size_t kPreambleAndSfdLen = kPreambleLen + 1;
inline constexpr std::size_t kInterFrameGap = 12;  // GMII cycles
inline constexpr std::size_t kShortBodyWarning = 60;
inline constexpr Byte kPreambleByte = 0x55;
inline constexpr Byte kSfdByte = 0xD5;

class MacAddress {
 public:
  constexpr MacAddress() = default;
  constexpr explicit MacAddress(const std::array<Byte, kMacLen>& octets) : octets_(octets) {}

  /// Parses "aa:bb:cc:dd:ee:ff" (hex digits in either case). Throws InputError.
  static MacAddress parse(std::string_view text);

  /// Lowercase colon-separated form.
  std::string to_string() const;

  constexpr const std::array<Byte, kMacLen>& octets() const { return octets_; }
  constexpr Byte operator[](std::size_t i) const { return octets_[i]; }

  friend constexpr auto operator<=>(const MacAddress&, const MacAddress&) = default;

 private:
  std::array<Byte, kMacLen> octets_{};
};

inline constexpr MacAddress kBroadcastMac{{0xff, 0xff, 0xff, 0xff, 0xff, 0xff}};

/// An Ethernet II frame without its FCS. The ethertype is carried opaquely.
struct EthernetFrame {
  MacAddress dst;
  MacAddress src;
  std::uint16_t ethertype = 0;
  Bytes payload;

  friend bool operator==(const EthernetFrame&, const EthernetFrame&) = default;
};

/// One GMII clock sample. `data` is meaningless when `dv` is low.
struct GmiiSymbol {
  Byte data = 0;
  bool dv = false;
  bool er = false;

  friend bool operator==(const GmiiSymbol&, const GmiiSymbol&) = default;
};

/// IEEE 802.3 CRC-32 (reflected 0x04C11DB7, init and final xor all-ones).
std::uint32_t crc32(std::span<const Byte> bytes);

/// Streaming form of crc32, fed one byte at a time.
class Crc32 {
 public:
  void update(Byte b);
  void update(std::span<const Byte> bytes);
  std::uint32_t value() const { return ~state_; }
  void reset() { state_ = 0xFFFFFFFFu; }

 private:
  std::uint32_t state_ = 0xFFFFFFFFu;
};

/// dst || src || ethertype || payload, i.e. the CRC-covered part of the body.
Bytes frame_header_and_payload(const EthernetFrame& frame);

/// Body as carried on the wire after the SFD: header, payload, FCS (LSB first).
/// With `corrupt_fcs` bit 0 of the first FCS byte is inverted.
Bytes frame_body(const EthernetFrame& frame, bool corrupt_fcs = false);

/// Preamble, SFD and body. Throws InputError if the payload exceeds 1500 bytes.
Bytes serialize_frame(const EthernetFrame& frame, bool corrupt_fcs = false);

/// Number of GMII bytes serialize_frame produces for a payload of this size.
constexpr std::size_t wire_length(std::size_t payload_len) {
  return kPreambleAndSfdLen + kHeaderLen + payload_len + kFcsLen;
}

struct ParsedFrame {
  EthernetFrame frame;
  std::array<Byte, kFcsLen> fcs{};
  bool fcs_ok = false;
};

/// Splits a body (no preamble/SFD) positionally and checks its FCS.
/// Throws RuntFrameError for bodies shorter than 18 bytes.
ParsedFrame parse_frame(std::span<const Byte> body);

struct ScheduledFrame {
  EthernetFrame frame;
  bool corrupt_fcs = false;
  std::uint64_t start_cycle = 0;
};

/// Lays frames for one port out on the GMII timeline. Frames are ordered by
/// start cycle; consecutive frames need at least 12 idle cycles between them.
/// Throws InputError on overlap or a short gap.
std::vector<GmiiSymbol> to_gmii_stream(std::span<const ScheduledFrame> frames);

std::string to_hex(std::span<const Byte> bytes);
/// Even-length hex string to bytes. Throws InputError.
Bytes from_hex(std::string_view hex);

}  // namespace l2sw
