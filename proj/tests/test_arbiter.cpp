#include <random>
#include <vector>

#include "doctest.h"
#include "l2sw/arbiter.hpp"
#include "oracles.hpp"

using namespace l2sw;

namespace {

std::optional<std::size_t> grant(RoundRobin& rr, std::vector<bool> req) {
  bool buf[32] = {};
  for (std::size_t i = 0; i < req.size(); ++i) buf[i] = req[i];
  return rr.grant(std::span<const bool>(buf, req.size()));
}

}  // namespace

TEST_CASE("round robin examples") {
  RoundRobin rr(4, 1);
  CHECK(grant(rr, {true, false, false, true}) == 3u);
  CHECK(rr.last_granted() == 3);
  CHECK(grant(rr, {true, false, false, true}) == 0u);
  CHECK(grant(rr, {false, false, false, false}) == std::nullopt);
  CHECK(rr.last_granted() == 0);
  CHECK(grant(rr, {true, false, false, false}) == 0u);
}

TEST_CASE("fresh arbiter favours client 0") {
  RoundRobin rr(4);
  CHECK(grant(rr, {true, true, true, true}) == 0u);
  CHECK(grant(rr, {true, true, true, true}) == 1u);
}

TEST_CASE("round robin matches ring scan") {
  std::mt19937_64 rng(3);
  for (std::size_t n : {2u, 4u, 9u}) {
    RoundRobin rr(n);
    std::size_t last = n - 1;
    for (int i = 0; i < 5000; ++i) {
      std::vector<bool> req(n);
      for (std::size_t c = 0; c < n; ++c) req[c] = rng() % 3 == 0;
      const auto want = oracle::rr_pick(req, last);
      REQUIRE(grant(rr, req) == want);
      if (want) last = *want;
    }
  }
}

TEST_CASE("every persistent requester is served within n grants") {
  RoundRobin rr(4);
  std::vector<int> seen(4, 0);
  for (int i = 0; i < 4; ++i) ++seen[*grant(rr, {true, true, true, true})];
  CHECK(seen == std::vector<int>{1, 1, 1, 1});
}

TEST_CASE("allocation queue keeps arrival order") {
  AllocQueue q(4);
  bool none[4] = {};
  bool r31[4] = {false, true, false, true};
  CHECK(q.grant(r31, true) == 1u);
  CHECK(q.grant(none, true) == 3u);
  CHECK(q.grant(none, true) == std::nullopt);
}

TEST_CASE("allocation queue waits on an empty free list") {
  AllocQueue q(4);
  bool none[4] = {};
  bool r2[4] = {false, false, true, false};
  bool r0[4] = {true, false, false, false};
  CHECK(q.grant(r2, false) == std::nullopt);
  CHECK(q.grant(r0, false) == std::nullopt);
  CHECK(q.grant(none, true) == 2u);
  CHECK(q.grant(none, true) == 0u);
}

TEST_CASE("allocation queue cancel") {
  AllocQueue q(4);
  bool r[4] = {true, true, true, false};
  q.grant(r, false);
  q.cancel(1);
  bool none[4] = {};
  CHECK(q.grant(none, true) == 0u);
  CHECK(q.grant(none, true) == 2u);
}

TEST_CASE("allocation order matches a fifo model") {
  std::mt19937_64 rng(5);
  AllocQueue q(4);
  std::deque<std::size_t> model;
  for (int i = 0; i < 5000; ++i) {
    bool r[4];
    for (std::size_t p = 0; p < 4; ++p) {
      r[p] = rng() % 4 == 0;
      if (r[p]) model.push_back(p);
    }
    const bool avail = rng() % 2 == 0;
    std::optional<std::size_t> want;
    if (avail && !model.empty()) {
      want = model.front();
      model.pop_front();
    }
    REQUIRE(q.grant(r, avail) == want);
  }
}
