// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>

namespace kgw {

struct RunOptions {
  std::string config_path;  // empty: command default (scatter only)
  std::string out_dir = ".";
  bool serial = false;
  std::optional<double> tol;
  std::optional<double> tau;
  std::optional<int> ncmax;
  std::optional<std::string> grid;    // "x0,x1,nx,y0,y1,ny"
  std::optional<std::string> b_grid;  // "b0,b1,n"
  bool quiet = false;
};

// Each returns the process status (0 ok, 3 no convergence) and throws Error otherwise.
int cmd_solve(const RunOptions& opt);
int cmd_grid(const RunOptions& opt);
int cmd_converge(const RunOptions& opt);
int cmd_scatter(const RunOptions& opt);
int cmd_selftest(const RunOptions& opt);

}  // namespace kgw
