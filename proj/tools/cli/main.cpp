// SPDX-License-Identifier: Apache-2.0
#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "kgwave/kgwave.h"

namespace {

struct Flags {
  std::string config, out = ".", grid, b_grid;
  bool serial = false, quiet = false;
  double tol = 0.0, tau = 0.0;
  int ncmax = 0;
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "JSON run config");
  sub->add_option("--out", f.out, "output directory");
  sub->add_flag("--serial", f.serial, "single thread, bit-reproducible output");
  sub->add_option("--tol", f.tol, "GMRES relative tolerance")->check(CLI::PositiveNumber);
  sub->add_option("--tau", f.tau, "buffer width scale")->check(CLI::PositiveNumber);
  sub->add_option("--ncmax", f.ncmax, "largest n_c of a 16, 32, ... ladder")->check(CLI::PositiveNumber);
  sub->add_flag("--quiet", f.quiet, "no progress messages");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Klein-Gordon interface wave solver"};
  app.set_version_flag("--version", std::string(kgw_version()));
  app.require_subcommand(1);
  Flags f;
  auto* solve = app.add_subcommand("solve", "solve and write densities, report and manifest");
  auto* grid = app.add_subcommand("grid", "evaluate the field on a rectangular grid");
  auto* conv = app.add_subcommand("converge", "n_c or tau convergence study at probe points");
  auto* scat = app.add_subcommand("scatter", "reflection/transmission sweep over the interface frequency b");
  auto* self = app.add_subcommand("selftest", "quick internal consistency checks");
  for (auto* s : {solve, grid, conv, scat, self}) add_common(s, f);
  grid->add_option("--grid", f.grid, "x0,x1,nx,y0,y1,ny");
  scat->add_option("--b-grid", f.b_grid, "b0,b1,n");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  kgw_run_options opt;
  kgw_run_options_init(&opt);
  opt.config_path = f.config.empty() ? nullptr : f.config.c_str();
  opt.out_dir = f.out.c_str();
  opt.serial = f.serial ? 1 : 0;
  opt.tol = f.tol;
  opt.tau = f.tau;
  opt.ncmax = f.ncmax;
  opt.grid = f.grid.empty() ? nullptr : f.grid.c_str();
  opt.b_grid = f.b_grid.empty() ? nullptr : f.b_grid.c_str();
  opt.quiet = f.quiet ? 1 : 0;

  kgw_status st = KGW_ERR_INTERNAL;
  if (*solve) st = kgw_cmd_solve(&opt);
  else if (*grid) st = kgw_cmd_grid(&opt);
  else if (*conv) st = kgw_cmd_converge(&opt);
  else if (*scat) st = kgw_cmd_scatter(&opt);
  else if (*self) st = kgw_cmd_selftest(&opt);

  if (st != KGW_OK) std::fprintf(stderr, "error: %s\n", kgw_last_error());
  switch (st) {
    case KGW_OK: return 0;
    case KGW_ERR_CONFIG: return 2;
    case KGW_ERR_CONVERGENCE: return 3;
    case KGW_ERR_IO: return 4;
    default: return 1;
  }
}
