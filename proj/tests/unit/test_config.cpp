// SPDX-License-Identifier: Apache-2.0
#include <string>

#include "core/config.hpp"
#include "doctest.h"

using namespace kgw;

namespace {

ErrorCode code_of(const std::string& text) {
  try {
    parse_run_config(text);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Internal;
}

std::string message_of(const std::string& text) {
  try {
    parse_run_config(text);
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("shipped configs parse and round trip") {
  for (const char* name : {"flat.json", "gauss_sine.json", "two_mass.json", "scatter.json"}) {
    CAPTURE(name);
    const RunConfig c = load_run_config(std::string(KGW_CONFIG_DIR) + "/" + name);
    const RunConfig d = parse_run_config(echo_run_config(c));
    CHECK(c == d);
    CHECK(echo_run_config(d) == echo_run_config(c));
  }
}

TEST_CASE("mass shorthand and defaults") {
  const RunConfig c = parse_run_config(R"({"m": 2, "E": 1, "sources": [{"pos": [0, 1]}]})");
  CHECK(c.problem.m1 == 2.0);
  CHECK(c.problem.m2 == 2.0);
  CHECK(c.problem.curve.family == "flat");
  CHECK(!c.problem.window.has_value());
  CHECK(c.problem.sources[0].strength == cplx(1.0, 0.0));
}

TEST_CASE("config errors name the offending field") {
  CHECK(code_of("{") == ErrorCode::Config);
  CHECK(code_of(R"({"m": 2, "E": 1})") == ErrorCode::Config);
  CHECK(message_of(R"({"m": 2, "E": 3, "sources": [{"pos": [0, 1]}]})").find("E") != std::string::npos);
  CHECK(message_of(R"({"m": 2, "E": 1, "tau": -1, "sources": [{"pos": [0, 1]}]})").find("tau") != std::string::npos);
  CHECK(message_of(R"({"m": 2, "E": 1, "bogus": 1, "sources": [{"pos": [0, 1]}]})").find("bogus") != std::string::npos);
  CHECK(message_of(R"({"m": 2, "E": 1, "sources": [{"pos": [0]}]})").find("sources") != std::string::npos);
  CHECK(code_of(R"({"m": 2, "E": 1, "window": [3, 1], "sources": [{"pos": [0, 1]}]})") == ErrorCode::Config);
  CHECK(code_of(R"({"m": 2, "E": 1, "curve": {"family": "spiral"}, "sources": [{"pos": [0, 1]}]})") ==
        ErrorCode::Config);
}

TEST_CASE("missing file is an I/O error") {
  try {
    load_run_config("/nonexistent/config.json");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Io);
  }
}

TEST_CASE("grid spec parsing") {
  const GridSpec g = parse_grid_spec("-1,1,11,-2,2,21");
  CHECK(g.nx == 11);
  CHECK(g.y1 == 2.0);
  CHECK_THROWS_AS(parse_grid_spec("1,2,3"), Error);
  CHECK_THROWS_AS(parse_grid_spec("0,1,0,0,1,5"), Error);
}
