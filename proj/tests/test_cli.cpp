#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "doctest.h"
#include "l2sw/trace.hpp"

#ifndef L2SW_CLI_PATH
#error "L2SW_CLI_PATH must point at the l2sw executable"
#endif

namespace {

int sh(const std::string& args) {
  const std::string cmd = std::string(L2SW_CLI_PATH) + " " + args;
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::size_t lines(const std::string& text) {
  std::size_t n = 0;
  for (char c : text) n += c == '\n';
  return n;
}

}  // namespace

TEST_CASE("flood-then-learn through the cli") {
  REQUIRE(sh("gen --scenario flood-then-learn --manifest cli_ftl.manifest.json > cli_ftl.jsonl") == 0);
  CHECK(lines(slurp("cli_ftl.jsonl")) == 8);
  CHECK(slurp("cli_ftl.manifest.json").find("\"description\"") != std::string::npos);
  REQUIRE(sh("run --trace cli_ftl.jsonl --out cli_ftl.ev.jsonl --stats cli_ftl.stats.json") == 0);
  const std::string ev = slurp("cli_ftl.ev.jsonl");
  CHECK(lines(ev) == 16);
  CHECK(ev.find("\"fcs_ok\":false") == std::string::npos);
  const std::string st = slurp("cli_ftl.stats.json");
  CHECK(st.find("\"floods\": 4") != std::string::npos);
  CHECK(st.find("\"unicasts\": 4") != std::string::npos);
}

TEST_CASE("crc-drop piped through stdin") {
  REQUIRE(sh("gen --scenario crc-drop | " + std::string(L2SW_CLI_PATH) +
             " run --trace - --out cli_crc.ev.jsonl --stats cli_crc.stats.json") == 0);
  CHECK(slurp("cli_crc.ev.jsonl").empty());
  const std::string st = slurp("cli_crc.stats.json");
  CHECK(st.find("\"rx_crc_drops\": 1") != std::string::npos);
  CHECK(st.find("\"final_free_blocks\": 64") != std::string::npos);
}

TEST_CASE("validate rejects a short gap with exit 2") {
  {
    std::ofstream t("cli_gap.jsonl");
    t << R"({"port":0,"start_gmii_cycle":0,"dst":"ff:ff:ff:ff:ff:ff","src":"02:00:00:00:00:01","ethertype":"0800","payload_hex":""})"
      << "\n"
      << R"({"port":0,"start_gmii_cycle":31,"dst":"ff:ff:ff:ff:ff:ff","src":"02:00:00:00:00:01","ethertype":"0800","payload_hex":""})"
      << "\n";
  }
  CHECK(sh("validate --trace cli_gap.jsonl 2> cli_gap.err") == 2);
  CHECK(slurp("cli_gap.err").find("line 2") != std::string::npos);
  CHECK(sh("run --trace cli_gap.jsonl --out cli_gap.ev 2> /dev/null") == 2);
}

TEST_CASE("validate accepts generated traces") {
  REQUIRE(sh("gen --scenario line-rate-4port > cli_lr.jsonl") == 0);
  CHECK(sh("validate --trace cli_lr.jsonl 2> /dev/null") == 0);
}

TEST_CASE("bad input exits 2") {
  CHECK(sh("run --trace does-not-exist.jsonl --out x 2> /dev/null") == 2);
  CHECK(sh("gen --scenario nope 2> /dev/null") == 2);
  CHECK(sh("frobnicate 2> /dev/null") == 2);
  {
    std::ofstream t("cli_bad.jsonl");
    t << "{\"port\":0}\n";
  }
  CHECK(sh("validate --trace cli_bad.jsonl 2> /dev/null") == 2);
}

TEST_CASE("fix-flood-leak flag and determinism") {
  REQUIRE(sh("gen --scenario voq-flood-leak > cli_leak.jsonl") == 0);
  REQUIRE(sh("run --trace cli_leak.jsonl --out cli_leak.a.ev --stats cli_leak.a.json") == 0);
  REQUIRE(sh("run --trace cli_leak.jsonl --out cli_leak.b.ev --stats cli_leak.b.json") == 0);
  CHECK(slurp("cli_leak.a.ev") == slurp("cli_leak.b.ev"));
  CHECK(slurp("cli_leak.a.json") == slurp("cli_leak.b.json"));
  CHECK(slurp("cli_leak.a.json").find("\"leaked_blocks\": 0") == std::string::npos);
  REQUIRE(sh("run --trace cli_leak.jsonl --fix-flood-leak --out cli_leak.f.ev --stats cli_leak.f.json") == 0);
  CHECK(slurp("cli_leak.f.json").find("\"leaked_blocks\": 0") != std::string::npos);
  CHECK(slurp("cli_leak.f.json").find("\"final_free_blocks\": 64") != std::string::npos);
}
