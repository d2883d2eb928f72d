#include <random>
#include <string>

#include "doctest.h"
#include "l2sw/error.hpp"
#include "l2sw/frame.hpp"
#include "oracles.hpp"

using namespace l2sw;

namespace {

Bytes ascii(const std::string& s) { return Bytes(s.begin(), s.end()); }

EthernetFrame sample_frame(std::size_t payload_len, std::mt19937_64& rng) {
  return EthernetFrame{oracle::mac(0x10), oracle::mac(0x20), 0x0800, oracle::random_bytes(rng, payload_len)};
}

}  // namespace

TEST_CASE("crc32 check values") {
  CHECK(crc32(Bytes{}) == 0x00000000u);
  CHECK(crc32(ascii("123456789")) == 0xCBF43926u);
  CHECK(oracle::crc32_bitwise(ascii("123456789")) == 0xCBF43926u);
  CHECK(crc32(ascii("The quick brown fox jumps over the lazy dog")) == 0x414FA339u);
}

TEST_CASE("crc32 table matches bitwise reference on random inputs") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 10000; ++i) {
    const Bytes data = oracle::random_bytes(rng, rng() % 300);
    REQUIRE(crc32(data) == oracle::crc32_bitwise(data));
  }
}

TEST_CASE("streaming crc equals one-shot") {
  std::mt19937_64 rng(8);
  const Bytes data = oracle::random_bytes(rng, 1000);
  Crc32 c;
  for (Byte b : data) c.update(b);
  CHECK(c.value() == crc32(data));
  c.reset();
  c.update(std::span<const Byte>(data).first(500));
  c.update(std::span<const Byte>(data).subspan(500));
  CHECK(c.value() == crc32(data));
}

TEST_CASE("mac address text form") {
  const MacAddress m = MacAddress::parse("02:AB:cd:00:ff:09");
  CHECK(m.to_string() == "02:ab:cd:00:ff:09");
  CHECK(MacAddress::parse(m.to_string()) == m);
  CHECK_THROWS_AS(MacAddress::parse("02:ab:cd:00:ff"), InputError);
  CHECK_THROWS_AS(MacAddress::parse("02:ab:cd:00:ff:gg"), InputError);
  CHECK_THROWS_AS(MacAddress::parse("02:ab:cd:00:ff:9"), InputError);
  CHECK(kBroadcastMac.to_string() == "ff:ff:ff:ff:ff:ff");
}

TEST_CASE("serialized layout") {
  std::mt19937_64 rng(1);
  const EthernetFrame f = sample_frame(0, rng);
  const Bytes wire = serialize_frame(f);
  REQUIRE(wire.size() == 26);
  CHECK(wire.size() == wire_length(0));
  for (int i = 0; i < 7; ++i) CHECK(wire[i] == 0x55);
  CHECK(wire[7] == 0xD5);
  CHECK(wire[8] == 0x02);
  CHECK(wire[13] == 0x10);
  CHECK(wire[19] == 0x20);
  CHECK(wire[20] == 0x08);
  CHECK(wire[21] == 0x00);
  const std::uint32_t fcs = crc32(std::span<const Byte>(wire).subspan(8, 14));
  CHECK(wire[22] == (fcs & 0xFF));
  CHECK(wire[25] == (fcs >> 24));
}

TEST_CASE("body crc residue") {
  // Running the CRC over a body including its FCS leaves the fixed residue.
  std::mt19937_64 rng(2);
  for (int i = 0; i < 50; ++i) {
    const Bytes body = frame_body(sample_frame(rng() % 100, rng));
    CHECK(crc32(body) == 0x2144DF1Cu);
  }
}

TEST_CASE("parse round-trip") {
  std::mt19937_64 rng(3);
  for (std::size_t len : {0u, 1u, 46u, 63u, 500u, 1500u}) {
    const EthernetFrame f = sample_frame(len, rng);
    const ParsedFrame p = parse_frame(frame_body(f));
    CHECK(p.frame == f);
    CHECK(p.fcs_ok);
  }
}

TEST_CASE("any single bit flip fails the fcs") {
  std::mt19937_64 rng(4);
  const Bytes body = frame_body(sample_frame(40, rng));
  for (std::size_t bit = 0; bit < body.size() * 8; ++bit) {
    Bytes b = body;
    b[bit / 8] ^= static_cast<Byte>(1u << (bit % 8));
    REQUIRE_FALSE(parse_frame(b).fcs_ok);
  }
}

TEST_CASE("corrupt fcs flips bit 0 of the first fcs byte") {
  std::mt19937_64 rng(5);
  const EthernetFrame f = sample_frame(10, rng);
  const Bytes good = frame_body(f);
  const Bytes bad = frame_body(f, true);
  REQUIRE(good.size() == bad.size());
  CHECK((good[good.size() - 4] ^ bad[bad.size() - 4]) == 0x01);
  CHECK_FALSE(parse_frame(bad).fcs_ok);
}

TEST_CASE("runt bodies are rejected") {
  CHECK_THROWS_AS(parse_frame(Bytes(17, 0)), RuntFrameError);
  CHECK_NOTHROW(parse_frame(Bytes(18, 0)));
}

TEST_CASE("payload limit") {
  std::mt19937_64 rng(6);
  CHECK_NOTHROW(serialize_frame(sample_frame(1500, rng)));
  CHECK_THROWS_AS(serialize_frame(sample_frame(1501, rng)), InputError);
}

TEST_CASE("gmii stream is contiguous with idle gaps") {
  std::mt19937_64 rng(9);
  const EthernetFrame a = sample_frame(46, rng);
  const EthernetFrame b = sample_frame(10, rng);
  const std::uint64_t b_start = wire_length(46) + 12;
  const std::vector<ScheduledFrame> frames = {{a, false, 0}, {b, false, b_start}};
  const auto stream = to_gmii_stream(frames);
  REQUIRE(stream.size() >= b_start + wire_length(10));
  const Bytes wa = serialize_frame(a);
  for (std::size_t i = 0; i < wa.size(); ++i) {
    REQUIRE(stream[i].dv);
    REQUIRE(stream[i].data == wa[i]);
  }
  for (std::size_t i = wa.size(); i < b_start; ++i) REQUIRE_FALSE(stream[i].dv);
  CHECK(stream[b_start].dv);
}

TEST_CASE("gmii stream gap rule") {
  std::mt19937_64 rng(10);
  const EthernetFrame a = sample_frame(46, rng);
  const std::uint64_t end = wire_length(46);
  CHECK_NOTHROW(to_gmii_stream(std::vector<ScheduledFrame>{{a, false, 0}, {a, false, end + 12}}));
  CHECK_THROWS_AS(to_gmii_stream(std::vector<ScheduledFrame>{{a, false, 0}, {a, false, end + 5}}), InputError);
  CHECK_THROWS_AS(to_gmii_stream(std::vector<ScheduledFrame>{{a, false, 0}, {a, false, 10}}), InputError);
}

TEST_CASE("hex helpers") {
  CHECK(to_hex(Bytes{0x00, 0xab, 0x10}) == "00ab10");
  CHECK(from_hex("00AB10") == Bytes{0x00, 0xab, 0x10});
  CHECK(from_hex("").empty());
  CHECK_THROWS_AS(from_hex("abc"), InputError);
  CHECK_THROWS_AS(from_hex("zz"), InputError);
}
