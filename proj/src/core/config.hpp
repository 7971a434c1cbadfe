// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "core/solver.hpp"

namespace kgw {

struct GridSpec {
  double x0 = -5.0, x1 = 5.0;
  int nx = 101;
  double y0 = -5.0, y1 = 5.0;
  int ny = 101;
};

struct ConvergeSpec {
  std::vector<int> nc;         // n_c ladder
  std::vector<double> tau;     // tau ladder at fixed nc (first entry of nc, or the problem's nc)
  std::vector<Vec2> probes;
  std::string reference = "self";  // self | sommerfeld
};

// A run file: the problem plus optional command sections.
struct RunConfig {
  ProblemConfig problem;
  std::optional<GridSpec> grid;
  std::optional<ConvergeSpec> converge;
  std::optional<std::vector<double>> b_grid;
};

RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::string& path);
// Canonical JSON text; parse_run_config(echo(c)) reproduces c exactly.
std::string echo_run_config(const RunConfig& c, int indent = 2);

bool operator==(const GridSpec& a, const GridSpec& b);
bool operator==(const ConvergeSpec& a, const ConvergeSpec& b);
bool operator==(const RunConfig& a, const RunConfig& b);

GridSpec parse_grid_spec(const std::string& csv);  // "x0,x1,nx,y0,y1,ny"

}  // namespace kgw
