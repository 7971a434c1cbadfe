// SPDX-License-Identifier: Apache-2.0
// Acceptance suite: one PASS/FAIL line per criterion.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "core/flatlab.hpp"
#include "core/kernels.hpp"
#include "core/scatter.hpp"
#include "core/solver.hpp"
#include "json.hpp"

using namespace kgw;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[1024];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

ProblemConfig flat_single() {
  ProblemConfig p;
  p.m1 = p.m2 = 2.0;
  p.E = 1.0;
  p.sources = {PointSource{{0.0, 2.5}, 1.0, 0}};
  p.window = std::array<double, 2>{-120.0, 120.0};
  return p;
}

ProblemConfig gauss_sine(int nc) {
  ProblemConfig p;
  p.m1 = p.m2 = 3.0;
  p.E = 2.0;
  p.curve.family = "gauss_sine";
  p.curve.params = {2.0, 0.05, 2.0, 0.4};
  p.sources = {PointSource{{0.0, 3.0}, 1.0, 0}};
  p.nc = nc;
  return p;
}

ProblemConfig flat_two_mass() {
  ProblemConfig p;
  p.m1 = 2.0;
  p.m2 = 3.0;
  p.E = 1.0;
  p.sources = {PointSource{{0.0, 1.5}, 1.0, 0}};
  p.window = std::array<double, 2>{-40.0, 40.0};
  return p;
}

struct Probe {
  Vec2 x;
  cplx u;
};

std::vector<Probe> load_flat_probes() {
  std::ifstream in(std::string(KGW_FIXTURE_DIR) + "/flat_probes.json");
  if (!in) throw std::runtime_error("missing fixture flat_probes.json");
  nlohmann::json j;
  in >> j;
  std::vector<Probe> out;
  for (const auto& r : j.at("probes"))
    out.push_back({{r[0].get<double>(), r[1].get<double>()}, {r[2].get<double>(), r[3].get<double>()}});
  return out;
}

double probe_error(const Solution& s, const std::vector<Probe>& probes) {
  FieldEvaluator ev(s);
  double worst = 0.0;
  for (const Probe& p : probes) worst = std::max(worst, std::abs(ev.value(p.x) - p.u) / std::abs(p.u));
  return worst;
}

bool strictly_decreasing(const std::vector<double>& v) {
  for (size_t i = 1; i < v.size(); ++i)
    if (!(v[i] < v[i - 1])) return false;
  return true;
}

std::string list(const std::vector<double>& v) {
  std::string s;
  for (double x : v) s += (s.empty() ? "" : " ") + fmt("%.2e", x);
  return s;
}

// ---------------------------------------------------------------------------

Outcome flat_accuracy() {
  const auto probes = load_flat_probes();
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<double> err;
  for (int nc : {16, 32, 64, 128}) {
    ProblemConfig p = flat_single();
    p.nc = nc;
    p.gmres_tol = 1e-12;
    err.push_back(probe_error(solve(p), probes));
  }
  const double wall = seconds_since(t0);
  const bool ok = strictly_decreasing(err) && err.back() <= 1e-6 && wall <= 30.0;
  return {ok, fmt("errors %s, wall %.1f s", list(err).c_str(), wall)};
}

Outcome self_convergence() {
  const std::vector<Vec2> probes = {{1.0, 1.5}, {-3.0, 2.0}, {4.0, -2.0}, {0.0, -3.0}};
  std::vector<std::vector<cplx>> u;
  for (int nc : {32, 64, 128, 256, 512}) {
    const Solution s = solve(gauss_sine(nc));
    FieldEvaluator ev(s);
    std::vector<cplx> v;
    for (const Vec2& x : probes) v.push_back(ev.value(x));
    u.push_back(v);
  }
  std::vector<double> err;
  for (size_t k = 0; k + 1 < u.size(); ++k) {
    double w = 0.0;
    for (size_t i = 0; i < probes.size(); ++i) w = std::max(w, std::abs(u[k][i] - u.back()[i]) / std::abs(u.back()[i]));
    err.push_back(w);
  }
  return {strictly_decreasing(err) && err.back() <= 1e-6, fmt("errors vs N=512: %s", list(err).c_str())};
}

Outcome tau_study() {
  const auto probes = load_flat_probes();
  auto run = [&](double tau) {
    ProblemConfig p = flat_single();
    p.nc = 64;
    p.tau = tau;
    return probe_error(solve(p), probes);
  };
  std::vector<double> band;
  for (double tau : {0.75, 0.875, 1.0}) band.push_back(run(tau));
  const double lo = *std::min_element(band.begin(), band.end());
  const double hi = *std::max_element(band.begin(), band.end());
  const double small = run(0.25);
  return {hi <= 2.0 * lo && small >= 10.0 * hi,
          fmt("tau 0.75/0.875/1: %s; tau 0.25: %.2e", list(band).c_str(), small)};
}

Outcome complexity() {
  std::vector<double> lx, ly;
  std::vector<int> iters;
  std::string detail;
  for (int nc : {64, 128, 256, 512, 1024}) {
    double best = 1e300;
    int it = 0;
    for (int rep = 0; rep < 2; ++rep) {
      const Solution s = solve(gauss_sine(nc));
      best = std::min(best, s.timings.gmres);
      it = s.gmres.iterations;
    }
    lx.push_back(std::log(nc));
    ly.push_back(std::log(best));
    iters.push_back(it);
    detail += fmt("%d:%.3fs/%dit ", nc, best, it);
  }
  const double n = static_cast<double>(lx.size());
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i] / n;
    my += ly[i] / n;
  }
  double sxy = 0.0, sxx = 0.0;
  for (size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  const double slope = sxy / sxx;
  const double growth = static_cast<double>(iters[3]) / iters[0];
  return {slope >= 0.9 && slope <= 1.25 && growth <= 2.0,
          fmt("slope %.3f, iteration growth 64->512 %.2f; %s", slope, growth, detail.c_str())};
}

Outcome operator_equivalence() {
  std::mt19937 gen(12345);
  std::normal_distribution<double> nd;
  auto randv = [&](int n) {
    Eigen::VectorXcd v(n);
    for (int i = 0; i < n; ++i) v[i] = cplx(nd(gen), nd(gen));
    return v;
  };

  ProblemConfig p = gauss_sine(125);
  const Medium md = make_medium(p);
  const Boundary bd = build_boundary(p, md);
  OpOptions opt;
  opt.eps_trunc = 1e-16;
  const SingleMassSystem sys(bd, md, opt);

  const Eigen::MatrixXcd Qd = sys.Q().dense();
  double qerr = 0.0;
  for (int r = 0; r < 20; ++r) {
    const Eigen::VectorXcd x = randv(bd.n_core());
    Eigen::VectorXcd y(bd.n_over());
    sys.Q().apply(x.data(), y.data());
    const Eigen::VectorXcd z = Qd * x;
    qerr = std::max(qerr, (y - z).norm() / z.norm());
  }

  const Eigen::MatrixXcd Ld = sys.dense_L();
  double lerr = 0.0;
  for (int r = 0; r < 20; ++r) {
    const Eigen::VectorXcd x = randv(bd.n_over());
    Eigen::VectorXcd y(bd.n_core());
    sys.apply_L(x.data(), y.data());
    const Eigen::VectorXcd z = Ld * x;
    lerr = std::max(lerr, (y - z).norm() / z.norm());
  }
  return {bd.n_core() == 2000 && qerr <= 1e-12 && lerr <= 1e-12,
          fmt("n_core %d: Q sweep vs dense %.2e, truncated L vs dense %.2e", bd.n_core(), qerr, lerr)};
}

// Windowed plane wave exp(-(t/W)^2) e^{i xi t} through an operator on the flat interface;
// error mid-window relative to the symbol prediction.
struct PlaneWave {
  double W = 80.0;
  double mid = 2.0;
  cplx at(double t, double xi) const { return std::exp(-(t / W) * (t / W)) * std::exp(cplx(0.0, xi * t)); }
};

Outcome symbol_suite() {
  double ident = 0.0, amin = 1e300;
  for (auto [m, E] : {std::pair{2.0, 1.0}, {4.0, 1.0}, {3.0, 2.0}})
    for (int k = 0; k < 10000; ++k) {
      const double xi = -50.0 + 100.0 * k / 9999.0;
      const cplx a = flat::symbol_a(xi, m, E);
      ident = std::max(ident, std::abs(a * flat::symbol_a_inv(xi, m, E) - 1.0));
      amin = std::min(amin, std::abs(a));
    }
  const Medium m2 = Medium::make(2.0, 3.0, 1.0);
  const double rE = std::max(std::abs(flat::symbol_R(1.0, 2.0, 3.0, 1.0)), std::abs(flat::symbol_R(-1.0, 2.0, 3.0, 1.0)));
  double nres = 0.0;
  for (double xi : {-1.0, 1.0}) {
    const auto L = flat::symbol_L2(xi, m2);
    const auto v = flat::null_vector(m2);
    nres = std::max(nres, std::abs(L[0] * v[0] + L[1] * v[1]) + std::abs(L[2] * v[0] + L[3] * v[1]));
  }

  // plane waves on the flat interface
  const PlaneWave pw;
  ProblemConfig p;
  p.m1 = p.m2 = 2.0;
  p.E = 1.0;
  p.window = std::array<double, 2>{-400.0, 400.0};
  p.max_chunk_len = 0.5;
  p.sources = {PointSource{{0.0, 1.0}, 1.0, 0}};
  double pw_err = 0.0;
  {
    const Medium md = make_medium(p);
    const Boundary bd = build_boundary(p, md);
    const SingleMassSystem sys(bd, md, OpOptions{});
    for (double xi : {0.0, 2.5}) {
      CVec mu(bd.n_over()), y(bd.n_core()), rho(bd.n_core()), out(bd.n_over());
      for (int j = 0; j < bd.n_over(); ++j) mu[j] = pw.at(bd.t[j], xi);
      for (int i = 0; i < bd.n_core(); ++i) rho[i] = pw.at(bd.t[bd.core_begin + i], xi);
      sys.apply_L(mu.data(), y.data());
      sys.apply_P(rho.data(), out.data());
      const double sl = flat::symbol_L(xi, 2.0, 1.0);
      const cplx sp = flat::symbol_P(xi, 2.0, 1.0);
      for (int i = 0; i < bd.n_core(); ++i) {
        const int j = bd.core_begin + i;
        if (std::abs(bd.t[j]) > pw.mid) continue;
        pw_err = std::max(pw_err, std::abs(y[i] - sl * mu[j]) / std::abs(sl));
        pw_err = std::max(pw_err, std::abs(out[j] - sp * rho[i]) / std::abs(sp));
      }
    }
  }
  double pw2_err = 0.0;
  {
    ProblemConfig q = p;
    q.m2 = 3.0;
    const Medium md = make_medium(q);
    const Boundary bd = build_boundary(q, md);
    const TwoMassSystem sys(bd, md, OpOptions{});
    const int n = bd.n_over(), nc = bd.n_core();
    for (double xi : {0.0, 2.5})
      for (int comp = 0; comp < 2; ++comp) {
        CVec mr(2 * n, 0.0), y(2 * nc), sg(2 * nc, 0.0), out(2 * n);
        for (int j = 0; j < n; ++j) mr[comp * n + j] = pw.at(bd.t[j], xi);
        for (int i = 0; i < nc; ++i) sg[comp * nc + i] = pw.at(bd.t[bd.core_begin + i], xi);
        sys.apply_L2(mr.data(), y.data());
        sys.apply_P2(sg.data(), out.data());
        const auto L = flat::symbol_L2(xi, md);
        const auto P = flat::symbol_P2(xi, md);
        const double lscale = std::max(std::abs(L[comp]), std::abs(L[2 + comp]));
        const double pscale = std::max(std::abs(P[comp]), std::abs(P[2 + comp]));
        for (int i = 0; i < nc; ++i) {
          const int j = bd.core_begin + i;
          if (std::abs(bd.t[j]) > pw.mid) continue;
          const cplx w = pw.at(bd.t[j], xi);
          for (int row = 0; row < 2; ++row) {
            pw2_err = std::max(pw2_err, std::abs(y[row * nc + i] - L[2 * row + comp] * w) / lscale);
            pw2_err = std::max(pw2_err, std::abs(out[row * n + j] - P[2 * row + comp] * w) / pscale);
          }
        }
      }
  }
  const bool ok = ident <= 1e-13 && rE <= 1e-12 && nres <= 1e-10 && amin > 0.0 && pw_err <= 1e-3 && pw2_err <= 1e-3;
  return {ok, fmt("|a a^-1 - 1| %.1e, min|a| %.3g, |R(+-E)| %.1e, null residual %.1e, plane wave L,P %.1e, L2,P2 %.1e",
                  ident, amin, rE, nres, pw_err, pw2_err)};
}

Outcome jumps_and_pde() {
  ProblemConfig f = flat_single();
  f.window = std::array<double, 2>{-60.0, 60.0};
  f.nc = 128;
  const Diagnostics df = diagnostics(solve(f));
  const Diagnostics dg = diagnostics(solve(gauss_sine(128)));
  const Diagnostics d2 = diagnostics(solve(flat_two_mass()));
  double ju = 0.0, jf = 0.0;
  for (const Diagnostics* d : {&df, &dg, &d2}) {
    ju = std::max(ju, d->jumps.jump_u);
    jf = std::max(jf, d->jumps.jump_flux);
  }
  const double r = dg.stencil.ratio;
  return {ju <= 1e-5 && jf <= 1e-5 && r >= 3.5 && r <= 4.5,
          fmt("[[u]] %.2e, flux %.2e (flat %.1e/%.1e, gauss_sine %.1e/%.1e, two-mass %.1e/%.1e), stencil ratio %.3f", ju, jf,
              df.jumps.jump_u, df.jumps.jump_flux, dg.jumps.jump_u, dg.jumps.jump_flux, d2.jumps.jump_u,
              d2.jumps.jump_flux, r)};
}

Outcome outgoing() {
  const double o = outgoing_residual(solve(gauss_sine(128)));
  return {o <= 1e-3, fmt("outer 10%% residual %.2e", o)};
}

Outcome scattering() {
  const std::vector<double> bs = default_b_grid();
  const auto res = sweep_b(default_scatter_config(), bs);
  double r01 = -1.0, r3 = -1.0, rmin = 1e300, rmax = -1e300, cons = 0.0;
  bool all_ok = true, dip = false;
  double dip_b = 0.0;
  for (size_t i = 0; i < res.size(); ++i) {
    const ScatterResult& r = res[i];
    all_ok = all_ok && r.ok;
    if (std::abs(r.b - 0.1) < 1e-9) r01 = r.R_L;
    if (std::abs(r.b - 3.0) < 1e-9) r3 = r.R_L;
    rmin = std::min(rmin, r.R_L);
    rmax = std::max(rmax, r.R_L);
    cons = std::max(cons, std::abs(r.T_L_prime - (1.0 - r.R_L)));
    if (i > 0 && i + 1 < res.size() && r.b >= 1.5 && r.b <= 2.0 && r.R_L < res[i - 1].R_L &&
        r.R_L < res[i + 1].R_L) {
      dip = true;
      dip_b = r.b;
    }
  }
  const bool ok = all_ok && r01 >= 0.0 && r01 <= 1e-2 && r3 >= 0.9 && rmin >= 0.0 && rmax <= 1.0 + 1e-6 && dip &&
                  cons <= 0.05;
  return {ok, fmt("R_L(0.1) %.2e, R_L(3) %.6f, range [%.2e, %.8f], dip %s at b=%.2f, max|T'-(1-R)| %.1e", r01, r3, rmin,
                  rmax, dip ? "found" : "missing", dip_b, cons)};
}

Outcome two_mass_flat() {
  const ProblemConfig p = flat_two_mass();
  const Solution s = solve(p);
  const Medium& md = s.medium;
  const Vec2 src = p.sources[0].pos;

  const int N = 8192;
  const double L = 160.0, h = L / N, t0 = -0.5 * L;
  CVec r1(N), r2(N);
  for (int k = 0; k < N; ++k) {
    const Vec2 x{t0 + k * h, 0.0};
    const double g = green(md.w2, x, src);
    const double dn = grad_green(md.w2, x, src).y;
    r1[k] = dn + md.mbar * g;
    r2[k] = -g;
  }
  CVec s1, s2;
  flat::flat_solve_fft2(r1, r2, h, md, s1, s2);
  const Boundary& bd = *s.boundary;
  std::vector<double> tc(bd.t.begin() + bd.core_begin, bd.t.begin() + bd.core_end);
  const auto f1 = flat::resample(s1, t0, h, tc);
  const auto f2 = flat::resample(s2, t0, h, tc);
  double num = 0.0, den = 0.0;
  for (int i = 0; i < bd.n_core(); ++i) {
    const double w = bd.weight[bd.core_begin + i];
    num += w * (std::norm(s.sigma1[i] - f1[i]) + std::norm(s.sigma2[i] - f2[i]));
    den += w * (std::norm(f1[i]) + std::norm(f2[i]));
  }
  const double rel = std::sqrt(num / den);
  return {s.gmres.converged && rel <= 1e-5, fmt("L2-relative density difference %.2e (%d iterations)", rel, s.gmres.iterations)};
}

}  // namespace

// Arguments select criteria by number; none runs all.
int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> checks = {
      {"flat-interface accuracy", flat_accuracy},
      {"self-convergence", self_convergence},
      {"buffer-width study", tau_study},
      {"linear complexity", complexity},
      {"operator equivalence", operator_equivalence},
      {"symbol suite", symbol_suite},
      {"jump and PDE residuals", jumps_and_pde},
      {"outgoing asymptotics", outgoing},
      {"scattering regimes", scattering},
      {"two-mass flat cross-check", two_mass_flat},
  };
  std::vector<bool> selected(checks.size(), argc < 2);
  for (int a = 1; a < argc; ++a) {
    const int k = std::atoi(argv[a]);
    if (k >= 1 && k <= static_cast<int>(checks.size())) selected[k - 1] = true;
  }
  int failures = 0, ran = 0;
  for (size_t i = 0; i < checks.size(); ++i) {
    if (!selected[i]) continue;
    ++ran;
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      o = checks[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s %2zu %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", i + 1, checks[i].first, o.detail.c_str(),
                seconds_since(t0));
    std::fflush(stdout);
  }
  std::printf("%d of %d criteria passed\n", ran - failures, ran);
  return failures == 0 ? 0 : 1;
}
