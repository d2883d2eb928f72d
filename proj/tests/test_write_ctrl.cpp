#include <random>

#include "doctest.h"
#include "l2sw/block_store.hpp"
#include "l2sw/error.hpp"
#include "l2sw/free_list.hpp"
#include "l2sw/write_ctrl.hpp"
#include "oracles.hpp"

using namespace l2sw;

namespace {

// One write controller wired to its own free list and SRAM. Allocation and
// write grants arrive the cycle after the request unless denied.
struct Bench {
  WriteController wr;
  FreeList fl;
  BlockStore mem;
  bool alloc_pending = false;
  std::size_t deny_writes = 0;
  std::vector<FrameDone> done;
  std::uint64_t cycles = 0;

  void cycle(const RxOutput& rx) {
    WriteCtrlInputs in;
    in.rx = rx;
    if (alloc_pending && !fl.empty()) {
      in.alloc_grant = fl.allocate();
      alloc_pending = false;
    }
    if (const auto& w = wr.write_request()) {
      if (deny_writes > 0) {
        --deny_writes;
      } else {
        in.mem_write_grant = true;
        mem.write_block(w->idx, w->block);
      }
    }
    if (const auto r = wr.release_request()) {
      in.release_grant = true;
      fl.release(*r);
    }
    const WriteCtrlOutputs out = wr.tick(in);
    for (BlockIndex b : out.surrendered) fl.set_refcount(b, 1);
    if (out.cancel_alloc) alloc_pending = false;
    if (out.alloc_request) alloc_pending = true;
    if (out.frame_done) done.push_back(*out.frame_done);
    mem.clock();
    fl.commit();
    ++cycles;
  }

  // One byte per four cycles; a byte waits while the controller is not ready.
  void send(const Bytes& body, bool error = false) {
    for (std::size_t i = 0; i < body.size(); ++i) {
      while (!wr.ready()) cycle({});
      RxOutput rx;
      rx.byte_valid = true;
      rx.byte = body[i];
      rx.sof = i == 0;
      cycle(rx);
      for (int k = 0; k < 3; ++k) cycle({});
    }
    while (!wr.ready()) cycle({});
    RxOutput eof;
    eof.eof = true;
    eof.error = error;
    cycle(eof);
    for (int k = 0; k < 20; ++k) cycle({});
  }

  void release_frame(const FrameDone& f) {
    for (BlockIndex b : f.blocks) {
      fl.set_refcount(b, 1);
      fl.release(b);
      fl.commit();
    }
  }
};

Bytes body_of(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return oracle::random_bytes(rng, n);
}

}  // namespace

TEST_CASE("130-byte body fills 63, 63, 4") {
  Bench b;
  const Bytes body = body_of(130, 1);
  b.send(body);
  REQUIRE(b.done.size() == 1);
  const FrameDone& f = b.done[0];
  CHECK_FALSE(f.error);
  CHECK(f.length == 130);
  REQUIRE(f.blocks.size() == 3);
  const auto walk = oracle::walk_chain(b.mem, f.start());
  CHECK(walk.terminated);
  REQUIRE(walk.chain.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(walk.chain[i] == f.blocks[i].value);
  CHECK_FALSE(b.mem.peek(f.blocks[0]).footer.eop);
  CHECK_FALSE(b.mem.peek(f.blocks[1]).footer.eop);
  CHECK(b.mem.peek(f.blocks[2]).footer.eop);
  CHECK(Bytes(walk.bytes.begin(), walk.bytes.begin() + 130) == body);
  CHECK(std::all_of(walk.bytes.begin() + 130, walk.bytes.end(), [](Byte x) { return x == 0; }));
  CHECK(b.wr.quiescent());
  CHECK(b.fl.free_count() == 64 - 3);
}

TEST_CASE("63-byte body is one block pointing at itself") {
  Bench b;
  b.send(body_of(63, 2));
  REQUIRE(b.done.size() == 1);
  REQUIRE(b.done[0].blocks.size() == 1);
  const BlockIndex only = b.done[0].blocks[0];
  CHECK(b.mem.peek(only).footer == BlockFooter{only, true});
  CHECK(b.fl.free_count() == 63);
}

TEST_CASE("exact multiples of 63 never end in an empty block") {
  for (std::size_t k : {2u, 3u, 5u}) {
    Bench b;
    b.send(body_of(63 * k, k));
    REQUIRE(b.done.size() == 1);
    CHECK(b.done[0].blocks.size() == k);
  }
}

TEST_CASE("aborted frame returns every block") {
  Bench b;
  b.send(body_of(200, 3), true);
  REQUIRE(b.done.size() == 1);
  CHECK(b.done[0].error);
  CHECK(b.wr.quiescent());
  CHECK(b.fl.free_count() == 64);
  CHECK(b.wr.held_blocks().empty());
}

TEST_CASE("memory walk reproduces every committed body") {
  std::mt19937_64 rng(4);
  Bench b;
  for (int i = 0; i < 60; ++i) {
    const std::size_t n = 18 + rng() % 1501;
    const Bytes body = oracle::random_bytes(rng, n);
    b.send(body);
    REQUIRE(b.done.size() == 1);
    const FrameDone f = b.done[0];
    b.done.clear();
    REQUIRE(f.blocks.size() == (n + 62) / 63);
    REQUIRE(f.length == n);
    const auto walk = oracle::walk_chain(b.mem, f.start());
    REQUIRE(walk.terminated);
    REQUIRE(walk.chain.size() == f.blocks.size());
    REQUIRE(Bytes(walk.bytes.begin(), walk.bytes.begin() + static_cast<long>(n)) == body);
    b.release_frame(f);
    REQUIRE(b.fl.free_count() == 64);
  }
}

TEST_CASE("ready drops while the footer waits for the write port") {
  Bench b;
  const Bytes body = body_of(100, 5);
  // Drive 64 bytes so the first footer is pending, then hold the port.
  for (std::size_t i = 0; i < 64; ++i) {
    RxOutput rx;
    rx.byte_valid = true;
    rx.byte = body[i];
    rx.sof = i == 0;
    b.deny_writes = i == 63 ? 5 : 0;
    b.cycle(rx);
    if (i < 63) {
      for (int k = 0; k < 3; ++k) b.cycle({});
    }
  }
  CHECK(b.wr.mode() == WriteMode::Footer);
  CHECK_FALSE(b.wr.ready());
  while (b.deny_writes > 0) b.cycle({});
  b.cycle({});
  CHECK(b.wr.ready());
  CHECK(b.wr.stall_cycles() > 0);
}

TEST_CASE("allocation starvation parks the controller in wait") {
  Bench b;
  std::vector<BlockIndex> taken;
  while (b.fl.free_count() > 1) {
    taken.push_back(*b.fl.allocate());
    b.fl.commit();
  }
  RxOutput rx;
  rx.byte_valid = true;
  rx.sof = true;
  b.cycle(rx);
  rx.sof = false;
  for (int i = 1; i < 64; ++i) {
    for (int k = 0; k < 3; ++k) b.cycle({});
    b.cycle(rx);
  }
  for (int k = 0; k < 4; ++k) b.cycle({});
  CHECK(b.wr.mode() == WriteMode::Wait);
  CHECK_FALSE(b.wr.ready());
  b.fl.set_refcount(taken.back(), 1);
  b.fl.release(taken.back());
  b.fl.commit();
  for (int k = 0; k < 4; ++k) b.cycle({});
  CHECK(b.wr.ready());
}

TEST_CASE("byte while not ready is a contract violation") {
  Bench b;
  b.deny_writes = 100;
  RxOutput rx;
  rx.byte_valid = true;
  rx.sof = true;
  b.cycle(rx);
  rx.sof = false;
  for (int i = 1; i < 64; ++i) b.cycle(rx), b.cycle({});
  b.cycle({});
  REQUIRE_FALSE(b.wr.ready());
  WriteCtrlInputs in;
  in.rx = rx;
  CHECK_THROWS_AS(b.wr.tick(in), InvariantViolation);
}
