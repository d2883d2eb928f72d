#include <random>

#include "doctest.h"
#include "l2sw/error.hpp"
#include "l2sw/forwarding.hpp"
#include "oracles.hpp"

using namespace l2sw;
using oracle::mac;

TEST_CASE("first learn lands in slot 0 with counter 1") {
  LearnTable t;
  const auto o = t.learn(mac(0xA), 2);
  CHECK(o.kind == LearnKind::Inserted);
  CHECK(o.slot == 0);
  CHECK(t.entries()[0] == LearnTableEntry{true, mac(0xA), 2, 1});
}

TEST_CASE("relearn remaps without duplicating") {
  LearnTable t;
  t.learn(mac(0xA), 2);
  const auto o = t.learn(mac(0xA), 3);
  CHECK(o.kind == LearnKind::Updated);
  CHECK(t.valid_count() == 1);
  CHECK(t.lookup(mac(0xA)) == 3u);
}

TEST_CASE("lookup hit bumps the hit and decays the others") {
  LearnTable t;
  t.learn(mac(0xA), 1);
  t.learn(mac(0xB), 2);
  CHECK(t.lookup(mac(0xA)) == 1u);
  CHECK(t.entries()[0].counter == 2);
  CHECK(t.entries()[1].counter == 0);
  CHECK(t.lookup(mac(0xA)) == 1u);
  CHECK(t.lookup(mac(0xA)) == 1u);
  CHECK(t.entries()[0].counter == 3);  // saturates at 2 bits
  CHECK(t.entries()[1].counter == 0);  // floors at 0
}

TEST_CASE("lookup miss changes nothing") {
  LearnTable t;
  t.learn(mac(0xA), 1);
  const auto before = std::vector<LearnTableEntry>(t.entries().begin(), t.entries().end());
  CHECK_FALSE(t.lookup(mac(0xC)).has_value());
  CHECK(std::equal(before.begin(), before.end(), t.entries().begin()));
}

TEST_CASE("eviction picks the lowest counter, lowest slot") {
  LearnTable t;
  for (int i = 0; i < 16; ++i) t.learn(mac(static_cast<Byte>(i)), 0);
  // One hit on slot 5 leaves every other entry at 0.
  t.lookup(mac(5));
  t.lookup(mac(5));
  const auto o = t.learn(mac(0x77), 1);
  CHECK(o.kind == LearnKind::Evicted);
  CHECK(o.slot == 0);
  CHECK(o.evicted == mac(0));
  CHECK(t.entries()[5].counter == 3);
}

TEST_CASE("immediate lookup after learn returns the port") {
  std::mt19937_64 rng(1);
  LearnTable t;
  for (int i = 0; i < 1000; ++i) {
    const MacAddress m = mac(static_cast<Byte>(rng() % 40));
    const PortId p = rng() % 4;
    t.learn(m, p);
    REQUIRE(t.lookup(m) == p);
  }
}

TEST_CASE("learn table equals the reference model") {
  std::mt19937_64 rng(2024);
  LearnTable t(16, 2);
  oracle::LearnTable ref(16, 2);
  for (int op = 0; op < 10000; ++op) {
    const MacAddress m = mac(static_cast<Byte>(rng() % 24));
    if (rng() % 2 == 0) {
      const PortId p = rng() % 4;
      const auto o = t.learn(m, p);
      ref.learn(m, p);
      if (o.kind == LearnKind::Evicted) {
        REQUIRE(ref.last_victim.has_value());
        REQUIRE(*o.evicted == *ref.last_victim);
      }
    } else {
      REQUIRE(t.lookup(m) == ref.lookup(m));
    }
    for (std::size_t i = 0; i < 16; ++i) {
      const auto& a = t.entries()[i];
      const auto& b = ref.slots()[i];
      REQUIRE(a.valid == b.valid);
      if (!a.valid) continue;
      REQUIRE(a.mac == b.mac);
      REQUIRE(a.port == b.port);
      REQUIRE(a.counter == b.counter);
    }
  }
}

TEST_CASE("route hit is unicast, including back to the ingress port") {
  const auto d = route(BlockIndex{3}, 64, 0, 2, 4);
  CHECK(d.kind == RouteKind::Unicast);
  CHECK(d.targets == std::vector<PortId>{2});
  CHECK(d.refcount == 1);
  CHECK(d.entry() == VoqEntry{BlockIndex{3}, false, 64});
  const auto hairpin = route(BlockIndex{3}, 64, 1, 1, 4);
  CHECK(hairpin.targets == std::vector<PortId>{1});
}

TEST_CASE("route miss floods every other port") {
  const auto d = route(BlockIndex{9}, 100, 2, std::nullopt, 4);
  CHECK(d.kind == RouteKind::Flood);
  CHECK(d.targets == std::vector<PortId>{0, 1, 3});
  CHECK(d.refcount == 3);
  CHECK(d.entry().flood);
  CHECK_THROWS_AS(route(BlockIndex{0}, 64, 4, std::nullopt, 4), InvariantViolation);
}
