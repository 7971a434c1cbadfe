// SPDX-License-Identifier: Apache-2.0
#include "core/commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "core/config.hpp"
#include "core/flatlab.hpp"
#include "core/io.hpp"
#include "core/parallel.hpp"
#include "core/scatter.hpp"
#include "core/solver.hpp"
#include "json.hpp"

namespace kgw {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

RunConfig prepare(const RunOptions& opt) {
  if (opt.config_path.empty()) fail(ErrorCode::Config, "--config: a config file is required");
  RunConfig rc = load_run_config(opt.config_path);
  if (opt.tol) rc.problem.gmres_tol = *opt.tol;
  if (opt.tau) rc.problem.tau = *opt.tau;
  validate(rc.problem);
  if (opt.serial) set_num_threads(1);
  ensure_dir(opt.out_dir);
  return rc;
}

void add_solve_timings(Manifest& m, const Solution& s) {
  m.add_timing("chunking", s.timings.chunking);
  m.add_timing("build", s.timings.build);
  m.add_timing("gmres", s.timings.gmres);
  m.add_timing("matvec", s.timings.matvec);
}

std::string run_info(const RunOptions& opt) {
  nlohmann::json j;
  j["serial"] = opt.serial;
  j["threads"] = num_threads();
  return j.dump();
}

void note(const RunOptions& opt, const std::string& msg) {
  if (!opt.quiet) std::fprintf(stderr, "%s\n", msg.c_str());
}

}  // namespace

int cmd_solve(const RunOptions& opt) {
  RunConfig rc = prepare(opt);
  const auto t0 = Clock::now();
  Solution sol = solve(rc.problem);
  const auto t1 = Clock::now();
  const Diagnostics diag = diagnostics(sol);
  sol.timings.evaluation = since(t1);
  Manifest man("solve", echo_run_config(rc));
  const std::string dens = join_path(opt.out_dir, "densities.csv");
  const std::string bnd = join_path(opt.out_dir, "boundary.csv");
  const std::string rep = join_path(opt.out_dir, "report.json");
  write_densities_csv(dens, sol);
  write_boundary_csv(bnd, *sol.boundary);
  write_text(rep, report_json(sol, &diag) + "\n");
  man.add_file("densities", dens);
  man.add_file("boundary", bnd);
  man.add_file("report", rep);
  add_solve_timings(man, sol);
  man.add_timing("diagnostics", sol.timings.evaluation);
  man.add_timing("total", since(t0));
  man.set("run", run_info(opt));
  man.write(join_path(opt.out_dir, "manifest.json"));
  note(opt, "solve: " + std::to_string(sol.gmres.iterations) + " iterations, residual " +
                std::to_string(sol.true_residual));
  return sol.gmres.converged ? 0 : 3;
}

int cmd_grid(const RunOptions& opt) {
  RunConfig rc = prepare(opt);
  if (opt.grid) rc.grid = parse_grid_spec(*opt.grid);
  if (!rc.grid) fail(ErrorCode::Config, "grid: no grid given (config 'grid' or --grid)");
  const GridSpec g = *rc.grid;
  const auto t0 = Clock::now();
  const Solution sol = solve(rc.problem);
  const auto t1 = Clock::now();
  FieldEvaluator ev(sol);
  const int n = g.nx * g.ny;
  std::vector<Vec2> pts(n);
  for (int iy = 0; iy < g.ny; ++iy)
    for (int ix = 0; ix < g.nx; ++ix) {
      const double x = g.nx > 1 ? g.x0 + (g.x1 - g.x0) * ix / (g.nx - 1) : g.x0;
      const double y = g.ny > 1 ? g.y0 + (g.y1 - g.y0) * iy / (g.ny - 1) : g.y0;
      pts[iy * g.nx + ix] = {x, y};
    }
  std::vector<cplx> val(n, 0.0);
  std::vector<int> masked(n, 0);
  parallel_for(n, [&](int i) {
    double d;
    ev.side(pts[i], d);
    bool near_src = false;
    for (const PointSource& s : sol.config.sources) near_src = near_src || norm(pts[i] - s.pos) < 1e-8;
    if (d < 1e-8 || near_src) {
      masked[i] = 1;
      return;
    }
    val[i] = ev.value(pts[i]);
  });
  const double teval = since(t1);
  const std::string fpath = join_path(opt.out_dir, "field.csv");
  const std::string ipath = join_path(opt.out_dir, "interface.csv");
  {
    CsvWriter w(fpath, {"x", "y", "re_u", "im_u", "abs_u", "masked"});
    for (int i = 0; i < n; ++i) {
      w << pts[i].x << pts[i].y << val[i].real() << val[i].imag() << std::abs(val[i]) << masked[i];
      w.end_row();
    }
    w.close();
  }
  write_interface_csv(ipath, *sol.boundary);
  Manifest man("grid", echo_run_config(rc));
  man.add_file("field", fpath);
  man.add_file("interface", ipath);
  add_solve_timings(man, sol);
  man.add_timing("evaluation", teval);
  man.add_timing("total", since(t0));
  man.set("run", run_info(opt));
  man.write(join_path(opt.out_dir, "manifest.json"));
  return sol.gmres.converged ? 0 : 3;
}

int cmd_converge(const RunOptions& opt) {
  RunConfig rc = prepare(opt);
  ConvergeSpec cs = rc.converge ? *rc.converge : ConvergeSpec{};
  if (opt.ncmax) {
    if (*opt.ncmax < 16) fail(ErrorCode::Config, "--ncmax: must be >= 16");
    cs.nc.clear();
    for (int n = 16; n <= *opt.ncmax; n *= 2) cs.nc.push_back(n);
  }
  const bool tau_ladder = !cs.tau.empty();
  const size_t len = tau_ladder ? cs.tau.size() : cs.nc.size();
  if (len < 2) fail(ErrorCode::Config, tau_ladder ? "converge.tau: ladder needs at least 2 entries"
                                                  : "converge.nc: ladder needs at least 2 entries");
  if (cs.probes.empty()) fail(ErrorCode::Config, "converge.probes: at least one probe is required");
  const Curve curve = make_curve(rc.problem.curve);
  for (size_t i = 0; i < cs.probes.size(); ++i) {
    double d;
    side_of(curve, cs.probes[i], d);
    if (d < 1e-8) fail(ErrorCode::Config, "converge.probes[" + std::to_string(i) + "]: probe lies on the interface");
  }
  const bool somm = cs.reference == "sommerfeld";
  if (somm && (rc.problem.curve.family != "flat" || rc.problem.m1 != rc.problem.m2))
    fail(ErrorCode::Config, "converge.reference: sommerfeld needs a flat single-mass problem");

  const auto t0 = Clock::now();
  struct Entry {
    double value;
    int nodes, iters;
    double wall;
    std::vector<cplx> u;
  };
  std::vector<Entry> rows;
  bool all_conv = true;
  for (size_t k = 0; k < len; ++k) {
    ProblemConfig p = rc.problem;
    if (tau_ladder) {
      p.tau = cs.tau[k];
      if (!cs.nc.empty()) p.nc = cs.nc.front();
    } else {
      p.nc = cs.nc[k];
    }
    const auto ts = Clock::now();
    const Solution sol = solve(p);
    all_conv = all_conv && sol.gmres.converged;
    FieldEvaluator ev(sol);
    Entry e{tau_ladder ? cs.tau[k] : static_cast<double>(cs.nc[k]), sol.boundary->n_core(), sol.gmres.iterations,
            0.0, {}};
    for (const Vec2& x : cs.probes) e.u.push_back(ev.value(x));
    e.wall = since(ts);
    rows.push_back(e);
    note(opt, "converge: " + std::string(tau_ladder ? "tau=" : "nc=") + std::to_string(e.value) + " done");
  }
  std::vector<cplx> ref(cs.probes.size());
  size_t ref_row = len;
  if (somm) {
    for (size_t i = 0; i < cs.probes.size(); ++i)
      for (const PointSource& s : rc.problem.sources)
        ref[i] += s.strength * flat::sommerfeld_field(cs.probes[i], s.pos, rc.problem.m1, rc.problem.E);
  } else {
    ref_row = 0;
    for (size_t k = 1; k < len; ++k)
      if (rows[k].value > rows[ref_row].value) ref_row = k;
    ref = rows[ref_row].u;
  }
  const std::string spath = join_path(opt.out_dir, "convergence.csv");
  const std::string ppath = join_path(opt.out_dir, "convergence_probes.csv");
  {
    CsvWriter w(spath, {"kind", "value", "n_nodes", "iterations", "max_rel_err", "wall_s", "is_reference"});
    CsvWriter wp(ppath, {"kind", "value", "probe", "x", "y", "re_u", "im_u", "re_ref", "im_ref", "rel_err"});
    const std::string kind = tau_ladder ? "tau" : "nc";
    for (size_t k = 0; k < len; ++k) {
      double worst = 0.0;
      for (size_t i = 0; i < cs.probes.size(); ++i) {
        const double err = std::abs(rows[k].u[i] - ref[i]) / std::abs(ref[i]);
        worst = std::max(worst, err);
        wp << kind << rows[k].value << static_cast<int>(i) << cs.probes[i].x << cs.probes[i].y << rows[k].u[i].real()
           << rows[k].u[i].imag() << ref[i].real() << ref[i].imag() << err;
        wp.end_row();
      }
      w << kind << rows[k].value << rows[k].nodes << rows[k].iters << worst << rows[k].wall << (k == ref_row ? 1 : 0);
      w.end_row();
    }
    w.close();
    wp.close();
  }
  Manifest man("converge", echo_run_config(rc));
  man.add_file("convergence", spath);
  man.add_file("convergence_probes", ppath);
  man.add_timing("total", since(t0));
  man.set("run", run_info(opt));
  man.set("reference", nlohmann::json(somm ? "sommerfeld" : "self").dump());
  man.write(join_path(opt.out_dir, "manifest.json"));
  return all_conv ? 0 : 3;
}

int cmd_scatter(const RunOptions& opt) {
  RunConfig rc;
  if (opt.config_path.empty()) {
    rc.problem = default_scatter_config();
    if (opt.tol) rc.problem.gmres_tol = *opt.tol;
    if (opt.tau) rc.problem.tau = *opt.tau;
    if (opt.serial) set_num_threads(1);
    ensure_dir(opt.out_dir);
  } else {
    rc = prepare(opt);
  }
  std::vector<double> bs = rc.b_grid ? *rc.b_grid : default_b_grid();
  if (opt.b_grid) {
    std::vector<double> v;
    std::stringstream ss(*opt.b_grid);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        v.push_back(std::stod(item));
      } catch (const std::exception&) {
        fail(ErrorCode::Config, "--b-grid: cannot parse '" + item + "'");
      }
    }
    if (v.size() != 3 || v[2] < 1 || v[2] != std::floor(v[2])) fail(ErrorCode::Config, "--b-grid: expected b0,b1,n");
    const int n = static_cast<int>(v[2]);
    bs.clear();
    for (int i = 0; i < n; ++i) bs.push_back(n == 1 ? v[0] : v[0] + (v[1] - v[0]) * i / (n - 1));
  }
  for (double b : bs)
    if (!(b >= 0.0)) fail(ErrorCode::Config, "b_grid: values must be >= 0");
  rc.b_grid = bs;
  const auto t0 = Clock::now();
  const auto res = sweep_b(rc.problem, bs, [&](const ScatterResult& r) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "scatter: b=%.4f R_L=%.6f T_L'=%.6f iters=%d%s", r.b, r.R_L, r.T_L_prime,
                  r.iterations, r.ok ? "" : " (failed)");
    note(opt, buf);
  });
  const std::string path = join_path(opt.out_dir, "sweep.csv");
  write_sweep_csv(path, res);
  Manifest man("scatter", echo_run_config(rc));
  man.add_file("sweep", path);
  man.add_timing("total", since(t0));
  man.set("run", run_info(opt));
  nlohmann::json errs = nlohmann::json::array();
  bool all_ok = true;
  for (const ScatterResult& r : res)
    if (!r.ok) {
      all_ok = false;
      errs.push_back({{"b", r.b}, {"error", r.error}});
    }
  man.set("failures", errs.dump());
  man.write(join_path(opt.out_dir, "manifest.json"));
  return all_ok ? 0 : 3;
}

int cmd_selftest(const RunOptions& opt) {
  if (opt.serial) set_num_threads(1);
  int failed = 0;
  auto report = [&](const char* name, bool ok, double v) {
    std::printf("%-36s %s  (%.3e)\n", name, ok ? "PASS" : "FAIL", v);
    failed += ok ? 0 : 1;
  };
  {
    double worst = 0.0;
    for (int i = 0; i <= 2000; ++i) {
      const double xi = -20.0 + 0.02 * i;
      worst = std::max(worst, std::abs(flat::symbol_a(xi, 2.0, 1.0) * flat::symbol_a_inv(xi, 2.0, 1.0) - 1.0));
    }
    report("symbol a * a^-1 = 1", worst < 1e-13, worst);
  }
  {
    const double r = std::max(std::abs(flat::symbol_R(1.0, 2.0, 3.0, 1.0)), std::abs(flat::symbol_R(-1.0, 2.0, 3.0, 1.0)));
    report("R(+-E) = 0", r < 1e-12, r);
  }
  {
    ProblemConfig p;
    p.m1 = p.m2 = 2.0;
    p.E = 1.0;
    p.sources = {PointSource{{0.0, 2.5}, 1.0, 0}};
    p.nc = 32;
    const Solution sol = solve(p);
    FieldEvaluator ev(sol);
    const Vec2 x{1.0, 1.0};
    const cplx u = ev.value(x), ref = flat::sommerfeld_field(x, p.sources[0].pos, 2.0, 1.0);
    const double err = std::abs(u - ref) / std::abs(ref);
    report("flat point source vs reference", sol.gmres.converged && err < 1e-5, err);
  }
  return failed == 0 ? 0 : 1;
}

}  // namespace kgw
