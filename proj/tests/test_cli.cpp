#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "twc/json_io.hpp"

using namespace twc;

namespace {

std::string twc_bin() {
  const char* p = std::getenv("TWC_BIN");
  return p ? p : "";
}

int run(const std::string& cmd) {
  int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("channel files round-trip bit exactly") {
  TwoWayChannel ch = gen_qary_noise_erasure(3, 1.0 / 3.0, 0.1234567890123456, 0.1, 0.2);
  nlohmann::json j = channel_to_json(ch);
  save_channel_file("/tmp/twc_roundtrip.json", j);
  ChannelFile back = load_channel_file("/tmp/twc_roundtrip.json");
  REQUIRE(std::holds_alternative<TwoWayChannel>(back));
  const TwoWayChannel& ch2 = std::get<TwoWayChannel>(back);
  REQUIRE(ch2.p.a.size() == ch.p.a.size());
  for (size_t i = 0; i < ch.p.a.size(); ++i) CHECK(ch2.p.a[i] == ch.p.a[i]);

  MadbChannel m = gen_madb_additive(3, {0.5, 0.25, 0.25}, {0.7, 0.2, 0.1},
                                    {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
  save_channel_file("/tmp/twc_roundtrip2.json", channel_to_json(m));
  ChannelFile back2 = load_channel_file("/tmp/twc_roundtrip2.json");
  REQUIRE(std::holds_alternative<MadbChannel>(back2));
  const MadbChannel& m2 = std::get<MadbChannel>(back2);
  for (size_t i = 0; i < m.p_y3.a.size(); ++i) CHECK(m2.p_y3.a[i] == m.p_y3.a[i]);
  for (int i = 0; i < 3; ++i) CHECK(m2.pz1[i] == m.pz1[i]);
}

TEST_CASE("schema errors") {
  CHECK_THROWS_AS(load_channel_file("/tmp/definitely_missing.json"), TwcError);
  std::ofstream("/tmp/twc_badkind.json") << "{\"kind\": \"nope\"}";
  try {
    load_channel_file("/tmp/twc_badkind.json");
    FAIL("expected SchemaError");
  } catch (const TwcError& e) {
    CHECK(e.code() == ErrorCode::SchemaError);
  }
}

TEST_CASE("command line exit codes and determinism") {
  std::string bin = twc_bin();
  if (bin.empty()) {
    MESSAGE("TWC_BIN not set; skipping binary tests");
    return;
  }
  CHECK(run(bin + " check /tmp/no_such_file.json > /dev/null 2>&1") == 2);
  CHECK(run(bin + " gen nosuchfamily -o /tmp/x.json > /dev/null 2>&1") == 2);
  CHECK(run(bin + " gen qary-erasure --q 2 --a2 0.1 --e2 0.2 -o /tmp/cli_chan.json") == 0);
  CHECK(run(bin + " region /tmp/cli_chan.json --bound sideways > /dev/null 2>&1") == 2);
  CHECK(run(bin + " region /tmp/cli_chan.json --bound inner --directions 21 -o "
                  "/tmp/cli_region.csv") == 0);
  std::string csv = slurp("/tmp/cli_region.csv");
  CHECK(csv.rfind("R1,R2\n", 0) == 0);

  // identical argv and seed produce byte-identical reports
  std::string cmd = bin +
                    " check /tmp/cli_chan.json --trials 200 --seed 9 --json > "
                    "/tmp/cli_rep_";
  CHECK(run(cmd + "a.json") == 0);
  CHECK(run(cmd + "b.json") == 0);
  CHECK(slurp("/tmp/cli_rep_a.json") == slurp("/tmp/cli_rep_b.json"));

  // oversized output alphabets make the exhaustive checkers refuse: exit 4
  CHECK(run(bin + " gen qary-erasure --q 8 -o /tmp/cli_wide.json") == 0);
  CHECK(run(bin + " check /tmp/cli_wide.json > /dev/null 2>&1") == 4);

  // madb surfaces
  CHECK(run(bin + " madb gen erasure --eps 0.1 -o /tmp/cli_madb.json") == 0);
  CHECK(run(bin + " madb support /tmp/cli_madb.json --weights 1,1,0,0 -o "
                  "/tmp/cli_madb.csv") == 0);
  std::string mcsv = slurp("/tmp/cli_madb.csv");
  CHECK(mcsv.rfind("w13,w23,w31,w32,inner,outer\n", 0) == 0);
  CHECK(run(bin + " memsim --n 100 --seed 3 > /tmp/cli_memsim.json") == 0);
  CHECK(slurp("/tmp/cli_memsim.json").find("\"errors\": 0") != std::string::npos);
}
