// SPDX-License-Identifier: Apache-2.0
#include "core/scatter.hpp"

#include <chrono>
#include <cmath>

namespace kgw {

SurfaceAmplitudes surface_amplitudes(const Solution& sol) {
  if (sol.two_mass) fail(ErrorCode::InvalidArgument, "surface_amplitudes: single-mass solution required");
  const Medium& md = sol.medium;
  const double pref = md.m1 * md.m1 / (2.0 * md.E);
  return {pref * density_fourier(*sol.boundary, sol.rho_core, md.E),
          pref * density_fourier(*sol.boundary, sol.rho_core, -md.E)};
}

ScatterResult reflection_transmission(const Solution& run, const Solution& baseline) {
  const ProblemConfig& a = run.config;
  const ProblemConfig& b = baseline.config;
  if (a.m1 != b.m1 || a.m2 != b.m2 || a.E != b.E || a.sources.size() != b.sources.size())
    fail(ErrorCode::InvalidArgument, "reflection_transmission: run and baseline differ in medium or sources");
  if (run.boundary->ap != baseline.boundary->ap)
    fail(ErrorCode::InvalidArgument, "reflection_transmission: run and baseline use different windows");
  const SurfaceAmplitudes s = surface_amplitudes(run), s0 = surface_amplitudes(baseline);
  ScatterResult r;
  r.C = s.right;
  r.B = s.left - s0.left;
  r.A = s0.right;
  const double a2 = std::norm(r.A);
  if (!(a2 > 1e-300)) fail(ErrorCode::Domain, "reflection_transmission: incoming amplitude vanishes");
  r.R_L = std::norm(r.B) / a2;
  r.T_L = 1.0 - r.R_L;
  r.T_L_prime = std::norm(r.C) / a2;
  r.iterations = run.gmres.iterations;
  if (a.curve.family == "gauss_sine" && a.curve.params.size() == 4) r.b = a.curve.params[2];
  return r;
}

ProblemConfig default_scatter_config() {
  ProblemConfig c;
  c.m1 = c.m2 = 4.0;
  c.E = 1.0;
  c.curve.family = "gauss_sine";
  c.curve.params = {2.0, 0.05, 0.0, 0.4};
  c.sources = {PointSource{{-40.0, 1.0}, 1.0, 0}};
  return c;
}

std::vector<double> default_b_grid() {
  std::vector<double> g(61);
  for (int i = 0; i < 61; ++i) g[i] = 3.0 * i / 60.0;
  return g;
}

std::vector<ScatterResult> sweep_b(const ProblemConfig& tmpl, const std::vector<double>& bs,
                                   const std::function<void(const ScatterResult&)>& progress) {
  if (tmpl.curve.family != "gauss_sine" || tmpl.curve.params.size() != 4)
    fail(ErrorCode::Config, "curve.family: the b sweep needs a gauss_sine curve");
  if (bs.empty()) fail(ErrorCode::Config, "b_grid: empty");
  for (double b : bs)
    if (!(b >= 0.0) || !std::isfinite(b)) fail(ErrorCode::Config, "b_grid: values must be finite and >= 0");
  if (tmpl.m1 != tmpl.m2) fail(ErrorCode::Config, "m2: the b sweep needs a single mass");

  // shared window: union of the automatic windows over the grid
  ProblemConfig run = tmpl;
  validate(run);
  if (!run.window) {
    const Medium md = make_medium(run);
    std::vector<Vec2> src;
    for (const PointSource& s : run.sources) src.push_back(s.pos);
    double lo = 1e300, hi = -1e300;
    std::vector<double> all = bs;
    all.push_back(0.0);
    for (double b : all) {
      CurveSpec cs = run.curve;
      cs.params[2] = b;
      const WindowHint w = suggest_window(make_curve(cs), src, md.omega_min(), run.eps);
      lo = std::min(lo, w.a);
      hi = std::max(hi, w.b);
    }
    run.window = std::array<double, 2>{lo, hi};
  }
  // reference solve on the straight interface
  ProblemConfig base = run;
  base.curve = CurveSpec{};
  const Solution sol0 = solve(base);
  if (!sol0.gmres.converged) fail(ErrorCode::Convergence, "sweep_b: baseline solve did not converge");

  std::vector<ScatterResult> out;
  for (double b : bs) {
    const auto t0 = std::chrono::steady_clock::now();
    ScatterResult r;
    try {
      ProblemConfig c = run;
      c.curve.params[2] = b;
      const Solution sol = solve(c);
      r = reflection_transmission(sol, sol0);
      if (!sol.gmres.converged) {
        r.ok = false;
        r.error = "gmres did not converge";
      }
    } catch (const std::exception& e) {
      r.ok = false;
      r.error = e.what();
    }
    r.b = b;
    r.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (progress) progress(r);
    out.push_back(r);
  }
  return out;
}

}  // namespace kgw
