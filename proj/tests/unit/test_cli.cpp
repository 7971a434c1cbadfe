// SPDX-License-Identifier: Apache-2.0
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string(KGW_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("kgwave_cli_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string cfg(const char* name) { return std::string(KGW_CONFIG_DIR) + "/" + name; }

}  // namespace

TEST_CASE("selftest succeeds") { CHECK(run("selftest --quiet") == 0); }

TEST_CASE("usage errors exit with 2") {
  CHECK(run("") == 2);
  CHECK(run("solve --no-such-flag") == 2);
  CHECK(run("frobnicate") == 2);
}

TEST_CASE("invalid configuration exits with 2") {
  const fs::path d = scratch("badcfg");
  fs::create_directories(d);
  std::ofstream(d / "bad.json") << R"({"m": 2, "E": 5, "sources": [{"pos": [0, 1]}]})";
  CHECK(run("solve --quiet --config " + (d / "bad.json").string() + " --out " + (d / "out").string()) == 2);
  CHECK(run("solve --quiet --config " + cfg("flat.json") + " --tau -1 --out " + (d / "out").string()) == 2);
}

TEST_CASE("missing input or unwritable output exits with 4") {
  CHECK(run("solve --quiet --config /nonexistent/cfg.json") == 4);
  CHECK(run("solve --quiet --config " + cfg("flat.json") + " --out /proc/forbidden") == 4);
}

TEST_CASE("unreachable tolerance exits with 3") {
  const fs::path d = scratch("conv");
  fs::create_directories(d);
  std::ofstream(d / "c.json") << R"({"m": 2, "E": 1, "window": [-30, 30], "sources": [{"pos": [0, 2.5]}],
                                   "gmres": {"tol": 1e-12, "max_iter": 2}})";
  CHECK(run("solve --quiet --config " + (d / "c.json").string() + " --out " + (d / "out").string()) == 3);
}

TEST_CASE("solve writes its artifacts") {
  const fs::path d = scratch("solve");
  REQUIRE(run("solve --quiet --serial --config " + cfg("flat.json") + " --out " + d.string()) == 0);
  for (const char* f : {"densities.csv", "boundary.csv", "report.json", "manifest.json"}) CHECK(fs::exists(d / f));
  std::ifstream in(d / "report.json");
  nlohmann::json r;
  in >> r;
  CHECK(r.at("converged").get<bool>());
  std::ifstream dens(d / "densities.csv");
  std::string header;
  std::getline(dens, header);
  CHECK(header == "node_id,t,sigma,x,y,is_buffer,re_rho,im_rho,re_mu,im_mu");
}

TEST_CASE("grid, converge and scatter commands") {
  const fs::path d = scratch("cmds");
  CHECK(run("grid --quiet --config " + cfg("flat.json") + " --grid -2,2,9,-2,2,9 --out " + (d / "g").string()) == 0);
  CHECK(fs::exists(d / "g" / "field.csv"));
  CHECK(fs::exists(d / "g" / "interface.csv"));
  CHECK(run("converge --quiet --config " + cfg("flat.json") + " --ncmax 64 --out " + (d / "c").string()) == 0);
  CHECK(fs::exists(d / "c" / "convergence.csv"));
  CHECK(run("scatter --quiet --b-grid 0.1,2.5,2 --out " + (d / "s").string()) == 0);
  std::ifstream in(d / "s" / "sweep.csv");
  std::string header;
  std::getline(in, header);
  CHECK(header == "b,R_L,T_L,T_L_prime,ReA,ImA,ReB,ImB,ReC,ImC,n_iter,wall_s");
}
