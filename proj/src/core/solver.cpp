// SPDX-License-Identifier: Apache-2.0
#include "core/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "core/kernels.hpp"
#include "core/parallel.hpp"
#include "core/specfun.hpp"

namespace kgw {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// closest point on the curve by Newton from t0
double closest_param(const Curve& c, Vec2 x, double t) {
  for (int it = 0; it < 50; ++it) {
    const CurvePoint p = c.eval(t);
    const Vec2 d = p.pos - x;
    const double f = dot(d, p.d1);
    const double fp = dot(p.d1, p.d1) + dot(d, p.d2);
    if (fp <= 0.0) break;
    const double dt = f / fp;
    t -= std::clamp(dt, -1.0, 1.0);
    if (std::abs(dt) < 1e-15 * std::max(1.0, std::abs(t))) break;
  }
  return t;
}

}  // namespace

bool ProblemConfig::operator==(const ProblemConfig& o) const {
  auto same_src = [](const std::vector<PointSource>& a, const std::vector<PointSource>& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
      if (a[i].pos.x != b[i].pos.x || a[i].pos.y != b[i].pos.y || a[i].strength != b[i].strength ||
          a[i].side != b[i].side)
        return false;
    return true;
  };
  return m1 == o.m1 && m2 == o.m2 && E == o.E && curve.family == o.curve.family && curve.params == o.curve.params &&
         curve.coeffs_x == o.curve.coeffs_x && curve.coeffs_y == o.curve.coeffs_y && window == o.window &&
         eps == o.eps && tau == o.tau && nc == o.nc && max_chunk_len == o.max_chunk_len &&
         same_src(sources, o.sources) && gmres_tol == o.gmres_tol && gmres_max_iter == o.gmres_max_iter &&
         eps_trunc == o.eps_trunc && fast == o.fast;
}

void validate(const ProblemConfig& c) {
  Medium::make(c.m1, c.m2, c.E);
  make_curve(c.curve);
  if (c.window && !((*c.window)[0] < (*c.window)[1])) fail(ErrorCode::Config, "window: need a < b");
  if (!(c.eps > 0.0) || !(c.eps < 1.0)) fail(ErrorCode::Config, "eps: must lie in (0, 1)");
  if (!(c.tau > 0.0)) fail(ErrorCode::Config, "tau: must be positive");
  if (c.nc < 0) fail(ErrorCode::Config, "nc: must be >= 0");
  if (!(c.gmres_tol > 0.0)) fail(ErrorCode::Config, "gmres.tol: must be positive");
  if (c.gmres_max_iter < 1) fail(ErrorCode::Config, "gmres.max_iter: must be >= 1");
  if (!(c.eps_trunc >= 0.0) || c.eps_trunc >= 1.0) fail(ErrorCode::Config, "eps_trunc: must lie in [0, 1)");
  for (size_t i = 0; i < c.sources.size(); ++i) {
    const PointSource& s = c.sources[i];
    if (!std::isfinite(s.pos.x) || !std::isfinite(s.pos.y))
      fail(ErrorCode::Config, "sources[" + std::to_string(i) + "].pos: non-finite");
    if (s.side != 0 && s.side != 1 && s.side != 2)
      fail(ErrorCode::Config, "sources[" + std::to_string(i) + "].side: must be 1 or 2");
  }
}

Curve make_curve(const CurveSpec& spec) {
  return build_curve(curve_family_from_string(spec.family), spec.params, spec.coeffs_x, spec.coeffs_y);
}

Medium make_medium(const ProblemConfig& cfg) { return Medium::make(cfg.m1, cfg.m2, cfg.E); }

int side_of(const Curve& c, Vec2 x, double& dist, double* tstar) {
  // coarse scan around the abscissa, then Newton
  double best = x.x, bestd = 1e300;
  for (int k = -2000; k <= 2000; ++k) {
    const double t = x.x + 0.025 * k;
    const double d = norm(c.eval(t).pos - x);
    if (d < bestd) {
      bestd = d;
      best = t;
    }
  }
  const double t = closest_param(c, x, best);
  const CurvePoint p = c.eval(t);
  dist = norm(x - p.pos);
  if (tstar) *tstar = t;
  return dot(p.normal, x - p.pos) > 0.0 ? 2 : 1;
}

std::vector<int> resolve_sides(const ProblemConfig& cfg, const Curve& c) {
  std::vector<int> sides;
  for (size_t i = 0; i < cfg.sources.size(); ++i) {
    double d;
    const int s = side_of(c, cfg.sources[i].pos, d);
    if (d < 1e-10) fail(ErrorCode::Config, "sources[" + std::to_string(i) + "]: source lies on the interface");
    if (cfg.sources[i].side != 0 && cfg.sources[i].side != s)
      fail(ErrorCode::Config, "sources[" + std::to_string(i) + "].side: tag disagrees with geometry");
    sides.push_back(s);
  }
  return sides;
}

Boundary build_boundary(const ProblemConfig& cfg, const Medium& md, double* chunk_seconds) {
  const auto t0 = std::chrono::steady_clock::now();
  const Curve curve = make_curve(cfg.curve);
  double a, b;
  if (cfg.window) {
    a = (*cfg.window)[0];
    b = (*cfg.window)[1];
  } else {
    std::vector<Vec2> src;
    for (const PointSource& s : cfg.sources) src.push_back(s.pos);
    const WindowHint w = suggest_window(curve, src, md.omega_min(), cfg.eps);
    a = w.a;
    b = w.b;
  }
  const double max_len =
      cfg.max_chunk_len > 0.0 ? cfg.max_chunk_len : 2.0 / std::max(std::max(md.w1, md.w2), std::abs(md.E));
  std::vector<double> core;
  BufferSpec bs;
  bs.tau = cfg.tau;
  bs.omega0 = md.omega_min();
  if (cfg.nc > 0) {
    core = uniform_chunk(a, b, cfg.nc);
    bs.nc = cfg.nc;
  } else {
    ChunkOptions co;
    co.eps = cfg.eps;
    co.max_len = max_len;
    core = balance_chunks(adaptive_chunk(curve, a, b, co));
    bs.nc = static_cast<int>(core.size()) - 1;
    bs.max_len = max_len;
  }
  Boundary bd = extend_with_buffers(curve, core, bs);
  if (chunk_seconds) *chunk_seconds = seconds_since(t0);
  return bd;
}

CVec incident_trace(const ProblemConfig& cfg, const Medium& md, const Boundary& bd, const std::vector<int>& sides) {
  const int nc = bd.n_core();
  if (md.equal_masses()) {
    CVec r(nc, 0.0);
    for (int i = 0; i < nc; ++i) {
      const int j = bd.core_begin + i;
      for (const PointSource& s : cfg.sources) r[i] += 2.0 * md.m1 * s.strength * green(md.w1, bd.pos[j], s.pos);
    }
    return r;
  }
  CVec r(2 * nc, 0.0);
  for (int i = 0; i < nc; ++i) {
    const int j = bd.core_begin + i;
    for (size_t k = 0; k < cfg.sources.size(); ++k) {
      const PointSource& s = cfg.sources[k];
      const double w = sides[k] == 2 ? md.w2 : md.w1;
      const double sg = sides[k] == 2 ? 1.0 : -1.0;
      const cplx g = s.strength * green(w, bd.pos[j], s.pos);
      const cplx dn = s.strength * dot(bd.normal[j], grad_green(w, bd.pos[j], s.pos));
      r[i] += sg * dn + md.mbar * g;   // [[du_i/dn]] + 2 mbar * avg(u_i)
      r[nc + i] += -sg * g;            // -[[u_i]]
    }
  }
  return r;
}

Solution solve(const ProblemConfig& cfg) {
  validate(cfg);
  Solution sol;
  sol.config = cfg;
  sol.medium = make_medium(cfg);
  const Medium& md = sol.medium;
  const Curve curve = make_curve(cfg.curve);
  sol.source_side = resolve_sides(cfg, curve);
  auto bd = std::make_shared<Boundary>(build_boundary(cfg, md, &sol.timings.chunking));
  sol.boundary = bd;
  sol.two_mass = !md.equal_masses();
  OpOptions opt;
  opt.eps_trunc = cfg.eps_trunc;
  opt.fast = cfg.fast;
  auto t0 = std::chrono::steady_clock::now();
  sol.rhs = incident_trace(cfg, md, *bd, sol.source_side);
  const int nc = bd->n_core(), n = bd->n_over();
  if (!sol.two_mass) {
    auto sys = std::make_shared<SingleMassSystem>(*bd, md, opt);
    sol.timings.build = seconds_since(t0);
    sol.system = sys;
    t0 = std::chrono::steady_clock::now();
    sol.rho_core =
        gmres([&](const cplx* x, cplx* y) { sys->apply(x, y); }, sol.rhs, cfg.gmres_tol, cfg.gmres_max_iter, sol.gmres);
    sol.timings.gmres = seconds_since(t0);
    sol.timings.matvec = sys->matvec_seconds;
    sol.mu.assign(n, 0.0);
    sys->apply_P(sol.rho_core.data(), sol.mu.data());
    sol.rho.assign(n, 0.0);
    for (int i = 0; i < nc; ++i) sol.rho[bd->core_begin + i] = sol.rho_core[i];
  } else {
    auto sys = std::make_shared<TwoMassSystem>(*bd, md, opt);
    sol.timings.build = seconds_since(t0);
    sol.system = sys;
    t0 = std::chrono::steady_clock::now();
    const CVec s =
        gmres([&](const cplx* x, cplx* y) { sys->apply(x, y); }, sol.rhs, cfg.gmres_tol, cfg.gmres_max_iter, sol.gmres);
    sol.timings.gmres = seconds_since(t0);
    sol.timings.matvec = sys->matvec_seconds;
    sol.sigma1.assign(s.begin(), s.begin() + nc);
    sol.sigma2.assign(s.begin() + nc, s.end());
    CVec mr(2 * n);
    sys->apply_P2(s.data(), mr.data());
    sol.mu.assign(mr.begin(), mr.begin() + n);
    sol.rho.assign(mr.begin() + n, mr.end());
  }
  // true residual
  {
    CVec x = sol.two_mass ? sol.sigma1 : sol.rho_core;
    if (sol.two_mass) x.insert(x.end(), sol.sigma2.begin(), sol.sigma2.end());
    CVec y(x.size());
    sol.system->apply(x.data(), y.data());
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < y.size(); ++i) {
      num += std::norm(y[i] - sol.rhs[i]);
      den += std::norm(sol.rhs[i]);
    }
    sol.true_residual = den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
  }
  return sol;
}

// ---------------------------------------------------------------------------

namespace {

struct Acc3 {
  cplx v[3];
  Acc3 operator+(const Acc3& o) const { return {{v[0] + o.v[0], v[1] + o.v[1], v[2] + o.v[2]}}; }
  Acc3 operator-(const Acc3& o) const { return {{v[0] - o.v[0], v[1] - o.v[1], v[2] - o.v[2]}}; }
  Acc3 operator*(double s) const { return {{v[0] * s, v[1] * s, v[2] * s}}; }
  double mag() const { return std::max({std::abs(v[0]), std::abs(v[1]), std::abs(v[2])}); }
};

constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.0};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
Acc3 adapt3(const F& f, double a, double b, double tol, int depth) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const Acc3 fc = f(c);
  Acc3 rk = fc * kWgk[7], rg = fc * kWg[3];
  double scale = fc.mag() * kWgk[7];  // for the roundoff floor
  for (int j = 0; j < 7; ++j) {
    const Acc3 l = f(c - h * kXgk[j]), r = f(c + h * kXgk[j]);
    const Acc3 s = l + r;
    rk = rk + s * kWgk[j];
    if (j % 2 == 1) rg = rg + s * kWg[j / 2];
    scale += (l.mag() + r.mag()) * kWgk[j];
  }
  const double err = (rk - rg).mag() * h;
  if (!(err > tol) || err <= 1e-12 * scale * h || depth >= 40) return rk * h;
  return adapt3(f, a, c, 0.5 * tol, depth + 1) + adapt3(f, c, b, 0.5 * tol, depth + 1);
}

std::vector<cplx> panel_coeffs(const Boundary& bd, const CVec& f, int p) {
  const GaussLegendre& g = gauss_legendre_cached(16);
  std::vector<cplx> c(16, 0.0);
  double pk[16];
  for (int i = 0; i < 16; ++i) {
    legendre_p_all(15, g.x[i], pk);
    for (int k = 0; k < 16; ++k) c[k] += g.w[i] * f[bd.panels[p].first + i] * pk[k];
  }
  for (int k = 0; k < 16; ++k) c[k] *= 0.5 * (2.0 * k + 1.0);
  return c;
}

cplx eval_coeffs(const std::vector<cplx>& c, double x) {
  double pk[16];
  legendre_p_all(15, x, pk);
  cplx s = 0.0;
  for (int k = 0; k < 16; ++k) s += c[k] * pk[k];
  return s;
}

}  // namespace

FieldEvaluator::FieldEvaluator(const Solution& sol) : sol_(&sol), bd_(sol.boundary.get()) {
  const Boundary& bd = *bd_;
  const int np = bd.n_panels();
  mu_coef_.resize(np);
  if (sol.two_mass) rho_coef_.resize(np);
  bbox_.resize(np);
  arc_.resize(np);
  for (int p = 0; p < np; ++p) {
    mu_coef_[p] = panel_coeffs(bd, sol.mu, p);
    if (sol.two_mass) rho_coef_[p] = panel_coeffs(bd, sol.rho, p);
    std::array<double, 4> bb{1e300, -1e300, 1e300, -1e300};
    double arc = 0.0;
    for (int i = 0; i < kNodesPerPanel; ++i) {
      const int j = bd.panels[p].first + i;
      bb[0] = std::min(bb[0], bd.pos[j].x);
      bb[1] = std::max(bb[1], bd.pos[j].x);
      bb[2] = std::min(bb[2], bd.pos[j].y);
      bb[3] = std::max(bb[3], bd.pos[j].y);
      arc += bd.weight[j];
    }
    // nodes are interior; include the end points
    for (double t : {bd.panels[p].a, bd.panels[p].b}) {
      const Vec2 q = bd.curve.eval(t).pos;
      bb[0] = std::min(bb[0], q.x);
      bb[1] = std::max(bb[1], q.x);
      bb[2] = std::min(bb[2], q.y);
      bb[3] = std::max(bb[3], q.y);
    }
    bbox_[p] = bb;
    arc_[p] = arc;
  }
  const double eps = sol.config.eps_trunc > 0.0 ? sol.config.eps_trunc : 1e-300;
  cutoff_ = std::log(1.0 / eps) / sol.medium.omega_min() + 1.0;
}

int FieldEvaluator::side(Vec2 x, double& dist) const {
  const Boundary& bd = *bd_;
  int best = 0;
  double bestd = 1e300;
  for (int j = 0; j < bd.n_over(); ++j) {
    const double d = norm(bd.pos[j] - x);
    if (d < bestd) {
      bestd = d;
      best = j;
    }
  }
  const double t = closest_param(bd.curve, x, bd.t[best]);
  const CurvePoint p = bd.curve.eval(t);
  dist = norm(x - p.pos);
  return dot(p.normal, x - p.pos) > 0.0 ? 2 : 1;
}

void FieldEvaluator::incident(Vec2 x, int side, bool want_grad, cplx& u, std::array<cplx, 2>& g) const {
  const Solution& s = *sol_;
  const Medium& md = s.medium;
  for (size_t k = 0; k < s.config.sources.size(); ++k) {
    const PointSource& ps = s.config.sources[k];
    if (s.two_mass && s.source_side[k] != side) continue;
    const double w = (s.two_mass && side == 2) ? md.w2 : md.w1;
    const double r = norm(x - ps.pos);
    if (r == 0.0) fail(ErrorCode::Domain, "eval_field: target coincides with a source");
    u += ps.strength * pot_S(w, x, ps.pos);
    if (want_grad) {
      const Vec2 gg = pot_grad_S(w, x, ps.pos);
      g[0] += ps.strength * gg.x;
      g[1] += ps.strength * gg.y;
    }
  }
}

void FieldEvaluator::layer(Vec2 x, int side, bool want_grad, cplx& u, std::array<cplx, 2>& g) const {
  const Solution& s = *sol_;
  const Boundary& bd = *bd_;
  const bool two = s.two_mass;
  const double w = (two && side == 2) ? s.medium.w2 : s.medium.w1;
  for (int p = 0; p < bd.n_panels(); ++p) {
    const auto& bb = bbox_[p];
    const double dx = std::max({0.0, bb[0] - x.x, x.x - bb[1]});
    const double dy = std::max({0.0, bb[2] - x.y, x.y - bb[3]});
    const double dist = std::hypot(dx, dy);
    if (dist > cutoff_) continue;
    const Panel& pn = bd.panels[p];
    if (dist >= arc_[p]) {
      for (int i = 0; i < kNodesPerPanel; ++i) {
        const int j = pn.first + i;
        const double wt = bd.weight[j];
        u += s.mu[j] * (pot_S(w, x, bd.pos[j]) * wt);
        if (two) u += s.rho[j] * (pot_D(w, x, bd.pos[j], bd.normal[j]) * wt);
        if (want_grad) {
          Vec2 gs = pot_grad_S(w, x, bd.pos[j]);
          g[0] += s.mu[j] * (gs.x * wt);
          g[1] += s.mu[j] * (gs.y * wt);
          if (two) {
            const Vec2 gd = pot_grad_D(w, x, bd.pos[j], bd.normal[j]);
            g[0] += s.rho[j] * (gd.x * wt);
            g[1] += s.rho[j] * (gd.y * wt);
          }
        }
      }
      continue;
    }
    const double h = pn.b - pn.a;
    double maxd = 0.0;
    for (int i = 0; i < kNodesPerPanel; ++i) {
      maxd = std::max(maxd, std::abs(s.mu[pn.first + i]));
      if (two) maxd = std::max(maxd, std::abs(s.rho[pn.first + i]));
    }
    if (maxd == 0.0) continue;
    auto f = [&](double t) {
      const CurvePoint cp = bd.curve.eval(t);
      const double xn = 2.0 * (t - pn.a) / h - 1.0;
      const cplx m = eval_coeffs(mu_coef_[p], xn) * cp.speed;
      Acc3 r{{m * pot_S(w, x, cp.pos), 0.0, 0.0}};
      cplx rr = 0.0;
      if (two) {
        rr = eval_coeffs(rho_coef_[p], xn) * cp.speed;
        r.v[0] += rr * pot_D(w, x, cp.pos, cp.normal);
      }
      if (want_grad) {
        const Vec2 gs = pot_grad_S(w, x, cp.pos);
        r.v[1] = m * gs.x;
        r.v[2] = m * gs.y;
        if (two) {
          const Vec2 gd = pot_grad_D(w, x, cp.pos, cp.normal);
          r.v[1] += rr * gd.x;
          r.v[2] += rr * gd.y;
        }
      }
      return r;
    };
    const double dmin = std::max(dist, 1e-6 * arc_[p]);
    const double tol = 1e-14 * maxd * arc_[p] * (want_grad ? 1.0 / std::min(dmin, 1.0) : 1.0);
    const Acc3 r = adapt3(f, pn.a, pn.b, tol, 0);
    u += r.v[0];
    if (want_grad) {
      g[0] += r.v[1];
      g[1] += r.v[2];
    }
  }
}

cplx FieldEvaluator::value(Vec2 x) const {
  double d;
  const int sd = side(x, d);
  if (d == 0.0) fail(ErrorCode::Domain, "eval_field: target on the interface");
  cplx u = 0.0;
  std::array<cplx, 2> g{};
  incident(x, sd, false, u, g);
  layer(x, sd, false, u, g);
  return u;
}

void FieldEvaluator::value_grad(Vec2 x, cplx& u, std::array<cplx, 2>& grad) const {
  double d;
  const int sd = side(x, d);
  if (d == 0.0) fail(ErrorCode::Domain, "eval_field: target on the interface");
  value_grad_side(x, sd, u, grad);
}

void FieldEvaluator::value_grad_side(Vec2 x, int sd, cplx& u, std::array<cplx, 2>& grad) const {
  u = 0.0;
  grad = {0.0, 0.0};
  incident(x, sd, true, u, grad);
  layer(x, sd, true, u, grad);
}

std::vector<cplx> eval_field(const Solution& sol, const std::vector<Vec2>& targets) {
  FieldEvaluator ev(sol);
  std::vector<cplx> out(targets.size());
  parallel_for(static_cast<int>(targets.size()), [&](int i) { out[i] = ev.value(targets[i]); });
  return out;
}

// ---------------------------------------------------------------------------

JumpDiagnostics jump_diagnostics(const Solution& sol, const FieldEvaluator& ev, int npoints) {
  const Boundary& bd = *sol.boundary;
  JumpDiagnostics jd;
  const double msum = sol.medium.m1 + sol.medium.m2;
  const double fr[3] = {1e-2, 5e-3, 2.5e-3};
  double umax = 0.0, fmax = 0.0, ju = 0.0, jf = 0.0;
  std::vector<std::array<cplx, 4>> lim(npoints);
  for (int k = 0; k < npoints; ++k) {
    const double t = bd.a + (bd.b - bd.a) * (k + 0.5) / npoints;
    const int p = bd.locate(t);
    double arc = 0.0;
    for (int i = 0; i < kNodesPerPanel; ++i) arc += bd.weight[bd.panels[p].first + i];
    const CurvePoint cp = bd.curve.eval(t);
    cplx up[3], um[3], dp[3], dm[3];
    for (int q = 0; q < 3; ++q) {
      const double d = fr[q] * arc;
      cplx u;
      std::array<cplx, 2> g;
      ev.value_grad_side(cp.pos + d * cp.normal, 2, u, g);
      up[q] = u;
      dp[q] = g[0] * cp.normal.x + g[1] * cp.normal.y;
      ev.value_grad_side(cp.pos - d * cp.normal, 1, u, g);
      um[q] = u;
      dm[q] = g[0] * cp.normal.x + g[1] * cp.normal.y;
    }
    auto rich = [](const cplx* f) { return (8.0 * f[2] - 6.0 * f[1] + f[0]) / 3.0; };
    const cplx u2 = rich(up), u1 = rich(um), d2 = rich(dp), d1 = rich(dm);
    ju = std::max(ju, std::abs(u2 - u1));
    jf = std::max(jf, std::abs(d2 - d1 + msum * 0.5 * (u2 + u1)));
    umax = std::max({umax, std::abs(u2), std::abs(u1)});
    fmax = std::max({fmax, std::abs(d2), std::abs(d1), msum * std::abs(u1)});
  }
  jd.points = npoints;
  jd.jump_u = umax > 0.0 ? ju / umax : ju;
  jd.jump_flux = fmax > 0.0 ? jf / fmax : jf;
  return jd;
}

StencilDiagnostics stencil_diagnostics(const Solution& sol, const FieldEvaluator& ev) {
  const Boundary& bd = *sol.boundary;
  StencilDiagnostics sd;
  const double tc = 0.5 * (bd.a + bd.b);
  const CurvePoint cp = bd.curve.eval(tc);
  Vec2 x0 = cp.pos + 1.0 * cp.normal;
  for (double off : {1.0, -1.0, 1.5, -1.5, 2.0, -2.0, 0.75, -0.75}) {
    const Vec2 cand = cp.pos + off * cp.normal;
    double dmin = 1e300;
    for (const PointSource& s : sol.config.sources) dmin = std::min(dmin, norm(cand - s.pos));
    double dg;
    ev.side(cand, dg);
    if (dmin > 0.6 && dg > 0.5) {
      x0 = cand;
      break;
    }
  }
  double dg;
  const int side = ev.side(x0, dg);
  const double w = (sol.two_mass && side == 2) ? sol.medium.w2 : sol.medium.w1;
  auto res = [&](double h) {
    const cplx c = ev.value(x0);
    const cplx s = ev.value({x0.x + h, x0.y}) + ev.value({x0.x - h, x0.y}) + ev.value({x0.x, x0.y + h}) +
                   ev.value({x0.x, x0.y - h});
    return std::abs(-(s - 4.0 * c) / (h * h) + w * w * c);
  };
  sd.point = x0;
  sd.h1 = 0.1;
  sd.h2 = 0.05;
  sd.res1 = res(sd.h1);
  sd.res2 = res(sd.h2);
  sd.ratio = sd.res2 > 0.0 ? sd.res1 / sd.res2 : 0.0;
  return sd;
}

cplx density_fourier(const Boundary& bd, const CVec& rho, double xi) {
  if (static_cast<int>(rho.size()) != bd.n_core()) fail(ErrorCode::InvalidArgument, "density_fourier: size mismatch");
  cplx s = 0.0;
  for (int i = 0; i < bd.n_core(); ++i) {
    const int j = bd.core_begin + i;
    s += std::exp(-kI * (xi * bd.sigma[j])) * rho[i] * bd.weight[j];
  }
  return s;
}

namespace {

// density generating the surface wave and its Q prefactor and sign in mu
void wave_density(const Solution& sol, CVec& dens, double& pref) {
  const Medium& md = sol.medium;
  if (!sol.two_mass) {
    dens = sol.rho_core;
    pref = md.m1 * md.m1 / md.E;
    return;
  }
  const double c = 0.5 / md.m2 - 0.5 / md.m1;
  const double det = -1.0 - c * c;
  dens.resize(sol.sigma1.size());
  for (size_t i = 0; i < dens.size(); ++i) dens[i] = (sol.sigma1[i] - c * sol.sigma2[i]) / det;
  pref = -md.mbar * md.mbar / md.E;
}

}  // namespace

double outgoing_residual(const Solution& sol) {
  const Boundary& bd = *sol.boundary;
  CVec dens;
  double pref;
  wave_density(sol, dens, pref);
  const double E = sol.medium.E;
  const cplx rp = density_fourier(bd, dens, E), rm = density_fourier(bd, dens, -E);
  const int nc = bd.n_core();
  const int outer = std::max(1, nc / 10);
  double mumax = 0.0;
  for (int i = 0; i < nc; ++i) mumax = std::max(mumax, std::abs(sol.mu[bd.core_begin + i]));
  double worst = 0.0;
  for (int i = 0; i < nc; ++i) {
    if (i >= outer && i < nc - outer) continue;
    const int j = bd.core_begin + i;
    const cplx asym = i < outer ? pref * std::exp(-kI * (E * bd.sigma[j])) * rm
                                : pref * std::exp(kI * (E * bd.sigma[j])) * rp;
    worst = std::max(worst, std::abs(sol.mu[j] - asym));
  }
  return mumax > 0.0 ? worst / mumax : worst;
}

double tail_fraction(const Solution& sol) {
  const Boundary& bd = *sol.boundary;
  const int nc = bd.n_core();
  const int outer = std::max(1, nc / 10);
  double tot = 0.0, tail = 0.0;
  for (int i = 0; i < nc; ++i) {
    const int j = bd.core_begin + i;
    const double v =
        (sol.two_mass ? std::norm(sol.sigma1[i]) + std::norm(sol.sigma2[i]) : std::norm(sol.rho_core[i])) *
        bd.weight[j];
    tot += v;
    if (i < outer || i >= nc - outer) tail += v;
  }
  return tot > 0.0 ? std::sqrt(tail / tot) : 0.0;
}

Diagnostics diagnostics(const Solution& sol) {
  Diagnostics d;
  FieldEvaluator ev(sol);
  d.jumps = jump_diagnostics(sol, ev);
  d.stencil = stencil_diagnostics(sol, ev);
  d.outgoing = outgoing_residual(sol);
  d.tail_fraction = tail_fraction(sol);
  const Boundary& bd = *sol.boundary;
  if (!sol.two_mass) {
    auto sys = std::dynamic_pointer_cast<const SingleMassSystem>(sol.system);
    CVec mu(bd.n_over());
    sys->apply_P(sol.rho_core.data(), mu.data());
    double num = 0.0, den = 0.0;
    for (int j = 0; j < bd.n_over(); ++j) {
      num += std::norm(mu[j] - sol.mu[j]);
      den += std::norm(sol.mu[j]);
    }
    d.mu_consistency = den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
  }
  return d;
}

}  // namespace kgw
