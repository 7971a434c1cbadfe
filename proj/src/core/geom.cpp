// SPDX-License-Identifier: Apache-2.0
#include "core/geom.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "core/specfun.hpp"

namespace kgw {

CurveFamily curve_family_from_string(const std::string& name) {
  if (name == "flat") return CurveFamily::Flat;
  if (name == "gauss_sine") return CurveFamily::GaussSine;
  if (name == "vshape") return CurveFamily::VShape;
  if (name == "custom") return CurveFamily::Custom;
  fail(ErrorCode::Config, "curve.family: unknown family '" + name + "' (flat, gauss_sine, vshape, custom)");
}

std::string to_string(CurveFamily f) {
  switch (f) {
    case CurveFamily::Flat: return "flat";
    case CurveFamily::GaussSine: return "gauss_sine";
    case CurveFamily::VShape: return "vshape";
    case CurveFamily::Custom: return "custom";
  }
  return "flat";
}

Curve::Curve(CurveFamily family, std::vector<double> params, std::vector<double> cx, std::vector<double> cy)
    : family_(family), params_(std::move(params)), cx_(std::move(cx)), cy_(std::move(cy)) {
  for (double v : params_)
    if (!std::isfinite(v)) fail(ErrorCode::Config, "curve.params: non-finite value");
  for (double v : cx_)
    if (!std::isfinite(v)) fail(ErrorCode::Config, "curve.coeffs_x: non-finite value");
  for (double v : cy_)
    if (!std::isfinite(v)) fail(ErrorCode::Config, "curve.coeffs_y: non-finite value");
  switch (family_) {
    case CurveFamily::Flat:
      if (!params_.empty()) fail(ErrorCode::Config, "curve.params: flat takes no parameters");
      break;
    case CurveFamily::GaussSine:
      if (params_.size() != 4) fail(ErrorCode::Config, "curve.params: gauss_sine needs (amplitude, envelope, b, phase)");
      if (params_[1] <= 0.0) fail(ErrorCode::Config, "curve.params: gauss_sine envelope must be positive");
      break;
    case CurveFamily::VShape:
      if (params_.size() != 3) fail(ErrorCode::Config, "curve.params: vshape needs (slope_left, slope_right, width)");
      if (params_[2] <= 0.0) fail(ErrorCode::Config, "curve.params: vshape width must be positive");
      break;
    case CurveFamily::Custom:
      if (params_.size() != 2 || !(params_[0] < params_[1]))
        fail(ErrorCode::Config, "curve.params: custom needs (t0, t1) with t0 < t1");
      if (cx_.empty() || cy_.empty()) fail(ErrorCode::Config, "curve.coeffs_x/coeffs_y: custom needs coefficients");
      break;
  }
}

Curve build_curve(CurveFamily family, const std::vector<double>& params, const std::vector<double>& cx,
                  const std::vector<double>& cy) {
  return Curve(family, params, cx, cy);
}

namespace {

// value, first and second derivative of a Legendre series in x in [-1, 1]
void legendre_series_d2(const std::vector<double>& c, double x, double& f, double& df, double& d2f) {
  const int n = static_cast<int>(c.size());
  double p0 = 1.0, p1 = x, dp0 = 0.0, dp1 = 1.0, ddp0 = 0.0, ddp1 = 0.0;
  f = c[0];
  df = 0.0;
  d2f = 0.0;
  if (n > 1) {
    f += c[1] * p1;
    df += c[1] * dp1;
  }
  for (int k = 2; k < n; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    const double dp2 = dp0 + (2.0 * k - 1.0) * p1;
    const double ddp2 = ddp0 + (2.0 * k - 1.0) * dp1;
    f += c[k] * p2;
    df += c[k] * dp2;
    d2f += c[k] * ddp2;
    p0 = p1;
    p1 = p2;
    dp0 = dp1;
    dp1 = dp2;
    ddp0 = ddp1;
    ddp1 = ddp2;
  }
}

double logcosh(double u) {
  const double a = std::abs(u);
  return a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0);
}

}  // namespace

void Curve::eval_custom(double t, CurvePoint& p) const {
  const double t0 = params_[0], t1 = params_[1];
  const double half = 0.5 * (t1 - t0);
  const double tc = std::clamp(t, t0, t1);
  const double x = (tc - 0.5 * (t0 + t1)) / half;
  double fx, dfx, d2fx, fy, dfy, d2fy;
  legendre_series_d2(cx_, x, fx, dfx, d2fx);
  legendre_series_d2(cy_, x, fy, dfy, d2fy);
  const Vec2 d1{dfx / half, dfy / half};
  if (t == tc) {
    p.pos = {fx, fy};
    p.d1 = d1;
    p.d2 = {d2fx / (half * half), d2fy / (half * half)};
  } else {
    p.pos = Vec2{fx, fy} + (t - tc) * d1;
    p.d1 = d1;
    p.d2 = {0.0, 0.0};
  }
}

CurvePoint Curve::eval(double t) const {
  CurvePoint p;
  switch (family_) {
    case CurveFamily::Flat:
      p.pos = {t, 0.0};
      p.d1 = {1.0, 0.0};
      p.d2 = {0.0, 0.0};
      break;
    case CurveFamily::GaussSine: {
      const double A = params_[0], c = params_[1], b = params_[2], ph = params_[3];
      const double g = A * std::exp(-c * t * t);
      const double sn = std::sin(b * t + ph), cs = std::cos(b * t + ph);
      const double y = g * sn;
      const double dy = g * (-2.0 * c * t * sn + b * cs);
      const double d2y = g * ((4.0 * c * c * t * t - 2.0 * c - b * b) * sn - 4.0 * b * c * t * cs);
      p.pos = {t, y};
      p.d1 = {1.0, dy};
      p.d2 = {0.0, d2y};
      break;
    }
    case CurveFamily::VShape: {
      const double sl = params_[0], sr = params_[1], w = params_[2];
      const double dh = 0.5 * (sr - sl), av = 0.5 * (sr + sl);
      const double th = std::tanh(t / w);
      p.pos = {t, dh * w * logcosh(t / w) + av * t};
      p.d1 = {1.0, dh * th + av};
      p.d2 = {0.0, dh * (1.0 - th * th) / w};
      break;
    }
    case CurveFamily::Custom:
      eval_custom(t, p);
      break;
  }
  p.speed = norm(p.d1);
  p.normal = {-p.d1.y / p.speed, p.d1.x / p.speed};
  return p;
}

std::vector<double> Curve::breakpoints() const {
  if (family_ == CurveFamily::Custom) return {params_[0], params_[1]};
  return {};
}

double Curve::center() const {
  if (family_ == CurveFamily::Custom) return 0.5 * (params_[0] + params_[1]);
  return 0.0;
}

Vec2 Curve::asymptotic_direction(int sign) const {
  Vec2 d{1.0, 0.0};
  switch (family_) {
    case CurveFamily::Flat:
    case CurveFamily::GaussSine:
      break;
    case CurveFamily::VShape:
      d = {1.0, sign < 0 ? params_[0] : params_[1]};
      break;
    case CurveFamily::Custom:
      d = eval(sign < 0 ? params_[0] - 1.0 : params_[1] + 1.0).d1;
      break;
  }
  const double s = norm(d);
  return {d.x / s, d.y / s};
}

// ---------------------------------------------------------------------------

double Boundary::sigma_at(int p, double tt) const {
  const Panel& pn = panels[p];
  const double h = pn.b - pn.a;
  const double x = 2.0 * (tt - pn.a) / h - 1.0;
  const int n = static_cast<int>(pn.speed_coef.size());
  double pk[kNodesPerPanel + 1];
  legendre_p_all(n, x, pk);
  double acc = pn.speed_coef[0] * (x + 1.0);
  for (int k = 1; k < n; ++k) acc += pn.speed_coef[k] * (pk[k + 1] - pk[k - 1]) / (2.0 * k + 1.0);
  return pn.sigma0 + 0.5 * h * acc;
}

double Boundary::panel_speed(int p, double tt) const {
  const Panel& pn = panels[p];
  const double x = 2.0 * (tt - pn.a) / (pn.b - pn.a) - 1.0;
  return legendre_eval(pn.speed_coef, x);
}

int Boundary::locate(double tt) const {
  auto it = std::upper_bound(panels.begin(), panels.end(), tt, [](double v, const Panel& p) { return v < p.b; });
  if (it == panels.end()) return n_panels() - 1;
  return static_cast<int>(it - panels.begin());
}

double resolution_tail(const Curve& c, double a, double b) {
  const GaussLegendre& g = gauss_legendre_cached(32);
  double xs[32], ys[32], ss[32];
  for (int i = 0; i < 32; ++i) {
    const CurvePoint p = c.eval(a + 0.5 * (b - a) * (g.x[i] + 1.0));
    xs[i] = p.pos.x;
    ys[i] = p.pos.y;
    ss[i] = p.speed;
  }
  double worst = 0.0;
  for (const double* f : {xs, ys, ss}) {
    const std::vector<double> co = legendre_coeffs(std::span<const double>(f, 32));
    double acc = 0.0;
    for (int k = 16; k < 32; ++k) acc += co[k] * co[k];
    worst = std::max(worst, std::sqrt(acc / 16.0));
  }
  return worst;
}

std::vector<double> adaptive_chunk(const Curve& c, double a, double b, const ChunkOptions& opt) {
  if (!(a < b)) fail(ErrorCode::Config, "window: need a < b");
  if (!(opt.eps > 0.0)) fail(ErrorCode::Config, "eps must be positive");
  std::vector<double> seeds{a};
  for (double t : c.breakpoints())
    if (t > a && t < b) seeds.push_back(t);
  seeds.push_back(b);
  std::vector<double> init{a};
  for (size_t i = 0; i + 1 < seeds.size(); ++i) {
    const double len = seeds[i + 1] - seeds[i];
    const int pieces = opt.max_len > 0.0 ? std::max(1, static_cast<int>(std::ceil(len / opt.max_len - 1e-12))) : 1;
    for (int k = 1; k <= pieces; ++k) init.push_back(k == pieces ? seeds[i + 1] : seeds[i] + len * k / pieces);
  }
  std::vector<double> out{a};
  std::function<void(double, double, int)> rec = [&](double lo, double hi, int depth) {
    if (resolution_tail(c, lo, hi) <= opt.eps) {
      out.push_back(hi);
      return;
    }
    if (depth >= opt.max_depth) fail(ErrorCode::Domain, "adaptive_chunk: recursion depth cap reached (curve not resolvable)");
    const double mid = 0.5 * (lo + hi);
    rec(lo, mid, depth + 1);
    rec(mid, hi, depth + 1);
  };
  for (size_t i = 0; i + 1 < init.size(); ++i) rec(init[i], init[i + 1], 0);
  return out;
}

std::vector<double> uniform_chunk(double a, double b, int nc) {
  if (!(a < b)) fail(ErrorCode::Config, "window: need a < b");
  if (nc < 1) fail(ErrorCode::Config, "nc must be >= 1");
  std::vector<double> br(nc + 1);
  for (int i = 0; i <= nc; ++i) br[i] = a + (b - a) * i / nc;
  br[nc] = b;
  return br;
}

std::vector<double> balance_chunks(std::vector<double> br) {
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<double> nb{br[0]};
    for (size_t i = 0; i + 1 < br.size(); ++i) {
      const double len = br[i + 1] - br[i];
      double shortest = len;
      if (i > 0) shortest = std::min(shortest, br[i] - br[i - 1]);
      if (i + 2 < br.size()) shortest = std::min(shortest, br[i + 2] - br[i + 1]);
      if (len > 2.0 * shortest * (1.0 + 1e-12)) {
        nb.push_back(0.5 * (br[i] + br[i + 1]));
        changed = true;
      }
      nb.push_back(br[i + 1]);
    }
    br.swap(nb);
  }
  return br;
}

int buffer_panels_per_side(const BufferSpec& spec, double core_param_len) {
  if (!(spec.tau > 0.0)) fail(ErrorCode::Config, "tau must be positive");
  const double width = spec.tau * spec.log_inv_eps / spec.omega0;
  int n = static_cast<int>(std::ceil(spec.tau * spec.nc * spec.log_inv_eps / (spec.omega0 * core_param_len) - 1e-9));
  if (spec.max_len > 0.0) n = std::max(n, static_cast<int>(std::ceil(width / spec.max_len - 1e-9)));
  return std::max(n, 1);
}

Boundary assemble_boundary(const Curve& c, const std::vector<double>& br, double a, double b) {
  Boundary bd;
  bd.curve = c;
  bd.a = a;
  bd.b = b;
  bd.ap = br.front();
  bd.bp = br.back();
  const GaussLegendre& g = gauss_legendre_cached(16);
  const int np = static_cast<int>(br.size()) - 1;
  bd.panels.resize(np);
  const int n = np * kNodesPerPanel;
  bd.t.resize(n);
  bd.pos.resize(n);
  bd.normal.resize(n);
  bd.speed.resize(n);
  bd.weight.resize(n);
  bd.sigma.resize(n);
  bd.curv.resize(n);
  bd.panel_of.resize(n);
  bd.core_panel_begin = -1;
  bd.core_panel_end = -1;
  const double tol = 1e-12 * std::max(1.0, std::abs(b - a));
  for (int p = 0; p < np; ++p) {
    Panel& pn = bd.panels[p];
    pn.a = br[p];
    pn.b = br[p + 1];
    pn.first = p * kNodesPerPanel;
    const double mid = 0.5 * (pn.a + pn.b);
    pn.buffer = mid < a - tol || mid > b + tol;
    if (!pn.buffer) {
      if (bd.core_panel_begin < 0) bd.core_panel_begin = p;
      bd.core_panel_end = p + 1;
    }
    const double h = pn.b - pn.a;
    double s[kNodesPerPanel];
    for (int i = 0; i < kNodesPerPanel; ++i) {
      const int j = pn.first + i;
      const double tt = pn.a + 0.5 * h * (g.x[i] + 1.0);
      const CurvePoint cp = c.eval(tt);
      bd.t[j] = tt;
      bd.pos[j] = cp.pos;
      bd.normal[j] = cp.normal;
      bd.speed[j] = cp.speed;
      bd.weight[j] = g.w[i] * cp.speed * 0.5 * h;
      bd.curv[j] = dot(cp.normal, cp.d2);
      bd.panel_of[j] = p;
      s[i] = cp.speed;
    }
    // 16-node Legendre fit of the speed (exact for degree <= 15)
    std::vector<double> co(kNodesPerPanel, 0.0);
    double pk[kNodesPerPanel];
    for (int i = 0; i < kNodesPerPanel; ++i) {
      legendre_p_all(kNodesPerPanel - 1, g.x[i], pk);
      for (int k = 0; k < kNodesPerPanel; ++k) co[k] += g.w[i] * s[i] * pk[k];
    }
    for (int k = 0; k < kNodesPerPanel; ++k) co[k] *= (2.0 * k + 1.0) / 2.0;
    pn.speed_coef = std::move(co);
  }
  if (bd.core_panel_begin < 0) fail(ErrorCode::Internal, "assemble_boundary: empty core");
  bd.core_begin = bd.core_panel_begin * kNodesPerPanel;
  bd.core_end = bd.core_panel_end * kNodesPerPanel;
  // arclength coordinate, sigma(t') = t' s(t') at the left end
  double sig = bd.ap * c.eval(bd.ap).speed;
  for (int p = 0; p < np; ++p) {
    Panel& pn = bd.panels[p];
    pn.sigma0 = sig;
    for (int i = 0; i < kNodesPerPanel; ++i) bd.sigma[pn.first + i] = bd.sigma_at(p, bd.t[pn.first + i]);
    sig += pn.speed_coef[0] * (pn.b - pn.a);
  }
  return bd;
}

Boundary extend_with_buffers(const Curve& c, const std::vector<double>& core, const BufferSpec& spec) {
  if (!(spec.tau > 0.0)) fail(ErrorCode::Config, "tau must be positive");
  if (!(spec.omega0 > 0.0)) fail(ErrorCode::Config, "omega0 must be positive");
  const double a = core.front(), b = core.back();
  BufferSpec sp = spec;
  if (sp.nc <= 0) sp.nc = static_cast<int>(core.size()) - 1;
  const int nb = buffer_panels_per_side(sp, b - a);
  const double width = sp.tau * sp.log_inv_eps / sp.omega0;
  const double wl = width / c.eval(a).speed;
  const double wr = width / c.eval(b).speed;
  std::vector<double> br;
  br.reserve(core.size() + 2 * nb);
  for (int i = 0; i < nb; ++i) br.push_back(a - wl + wl * i / nb);
  br.insert(br.end(), core.begin(), core.end());
  for (int i = 1; i <= nb; ++i) br.push_back(i == nb ? b + wr : b + wr * i / nb);
  br = balance_chunks(std::move(br));
  return assemble_boundary(c, br, a, b);
}

WindowHint suggest_window(const Curve& c, const std::vector<Vec2>& sources, double omega, double eps) {
  if (!(eps > 0.0) || !(omega > 0.0)) fail(ErrorCode::InvalidArgument, "suggest_window: need eps, omega > 0");
  const double t0 = c.center();
  auto straight_beyond = [&](double t, int sign) {
    const Vec2 dir = c.asymptotic_direction(sign);
    // sample outward; asymptotic flatness makes the deviation decay
    for (int k = 0; k <= 64; ++k) {
      const double tt = t + sign * 0.25 * k;
      const CurvePoint p = c.eval(tt);
      const Vec2 u{p.d1.x / p.speed, p.d1.y / p.speed};
      if (norm(u - dir) > eps) return false;
    }
    return true;
  };
  WindowHint w{t0 - 1.0, t0 + 1.0};
  for (int sign : {-1, 1}) {
    double lo = 0.0, hi = 1.0;
    while (!straight_beyond(t0 + sign * hi, sign)) {
      lo = hi;
      hi *= 2.0;
      if (hi > 1e6) fail(ErrorCode::Domain, "suggest_window: curve not asymptotically straight");
    }
    for (int it = 0; it < 40; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (straight_beyond(t0 + sign * mid, sign)) hi = mid;
      else lo = mid;
    }
    if (sign < 0) w.a = std::min(w.a, t0 - hi);
    else w.b = std::max(w.b, t0 + hi);
  }
  const double reach = std::log(1.0 / eps) / omega;
  for (const Vec2& s : sources) {
    // nearest parameter by sampling the curve around the source abscissa
    double best = t0, bestd = 1e300;
    for (int k = -4000; k <= 4000; ++k) {
      const double tt = s.x + 0.01 * k;
      const double d = norm(c.eval(tt).pos - s);
      if (d < bestd) {
        bestd = d;
        best = tt;
      }
    }
    const double ext = std::max(0.0, reach - bestd) + 1.0;
    w.a = std::min(w.a, best - ext);
    w.b = std::max(w.b, best + ext);
  }
  return w;
}

}  // namespace kgw
