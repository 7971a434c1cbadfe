// SPDX-License-Identifier: Apache-2.0
#include "core/flatlab.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>

#include "core/kernels.hpp"
#include "core/quad.hpp"

namespace kgw::flat {

namespace {

std::mutex g_plan_mutex;

void check_single(double m, double E) {
  if (!(m > 0.0) || !(std::abs(E) < m) || E == 0.0)
    fail(ErrorCode::InvalidArgument, "flat symbol: requires 0 < |E| < m");
}

// in-place DFT; sign -1 forward, +1 backward (unnormalized)
void dft(std::vector<cplx>& v, int sign) {
  const int n = static_cast<int>(v.size());
  auto* p = reinterpret_cast<fftw_complex*>(v.data());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lk(g_plan_mutex);
    plan = fftw_plan_dft_1d(n, p, p, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  std::lock_guard<std::mutex> lk(g_plan_mutex);
  fftw_destroy_plan(plan);
}

double freq(int p, int n, double h) {
  const int q = p < (n + 1) / 2 ? p : p - n;
  return 2.0 * kPi * q / (n * h);
}

void check_decay(const CVec& f, const char* what) {
  double mx = 0.0;
  for (const cplx& z : f) mx = std::max(mx, std::abs(z));
  if (mx == 0.0) return;
  if (std::abs(f.front()) > 1e-12 * mx || std::abs(f.back()) > 1e-12 * mx)
    fail(ErrorCode::Domain, std::string(what) + ": input has not decayed at the grid ends");
}

}  // namespace

cplx symbol_a(double xi, double m, double E) {
  check_single(m, E);
  const double k = std::sqrt(xi * xi + m * m - E * E);
  // (1 - m/k)(1 - 2 i m^2/(xi^2 - E^2)) with the factor xi^2 - E^2 cancelled
  return cplx(xi * xi - E * E, -2.0 * m * m) / (k * (k + m));
}

cplx symbol_a_inv(double xi, double m, double E) {
  check_single(m, E);
  const double k = std::sqrt(xi * xi + m * m - E * E);
  const cplx d(xi * xi - E * E, -2.0 * m * m);
  return (1.0 + m / k) * (1.0 + cplx(1.0, 2.0) * (m * m) / d);
}

double symbol_L(double xi, double m, double E) { return 1.0 - m / std::sqrt(xi * xi + m * m - E * E); }

cplx symbol_P(double xi, double m, double E) { return 1.0 - cplx(0.0, 2.0 * m * m) / (xi * xi - E * E); }

Mat2 symbol_P2(double xi, const Medium& md) {
  const double c = 0.5 / md.m2 - 0.5 / md.m1;
  const double det = -1.0 - c * c;
  const cplx q = cplx(0.0, -2.0 * md.mbar * md.mbar) / (xi * xi - md.E * md.E);
  return {1.0 - q / det, q * c / det, q * c / det, 1.0 - q * c * c / det};
}

double symbol_R(double xi, double m1, double m2, double E) {
  const Medium md = Medium::make(m1, m2, E);
  const double x1 = std::sqrt(xi * xi + md.w1 * md.w1), x2 = std::sqrt(xi * xi + md.w2 * md.w2);
  return -1.0 + 0.25 * (x2 - x1) * (1.0 / x2 - 1.0 / x1) + 0.25 * (m1 + m2) * (1.0 / x2 + 1.0 / x1);
}

Mat2 symbol_L2(double xi, const Medium& md) {
  const double x1 = std::sqrt(xi * xi + md.w1 * md.w1), x2 = std::sqrt(xi * xi + md.w2 * md.w2);
  return {1.0 - md.mbar * (0.5 / x2 + 0.5 / x1), 0.5 * (x2 - x1), 0.5 / x2 - 0.5 / x1, 1.0};
}

std::array<double, 2> null_vector(const Medium& md) { return {-1.0, 0.5 / md.m2 - 0.5 / md.m1}; }

Mat2 symbol_system2(double xi, const Medium& md) {
  const double m1 = md.m1, m2 = md.m2, mb = md.mbar;
  const double x1 = std::sqrt(xi * xi + md.w1 * md.w1), x2 = std::sqrt(xi * xi + md.w2 * md.w2);
  const double c = 0.5 / m2 - 0.5 / m1;
  const double det = -1.0 - c * c;
  const double w0 = 1.0 / det, w1 = -c / det;
  // (L2 v) / (xi^2 - E^2), written without cancellation
  const double r1 = -0.5 * mb * (1.0 / (m2 * x2 * (x2 + m2)) + 1.0 / (m1 * x1 * (x1 + m1))) +
                    0.5 * c * (1.0 / (x2 + m2) - 1.0 / (x1 + m1));
  const double r2 = 0.5 / (m2 * x2 * (m2 + x2)) - 0.5 / (m1 * x1 * (m1 + x1));
  const cplx q(0.0, -2.0 * mb * mb);
  Mat2 L = symbol_L2(xi, md);
  L[0] += q * r1 * w0;
  L[1] += q * r1 * w1;
  L[2] += q * r2 * w0;
  L[3] += q * r2 * w1;
  return L;
}

CVec apply_multiplier(const CVec& f, double h, const std::function<cplx(double)>& sym) {
  const int n = static_cast<int>(f.size());
  CVec v = f;
  if (n == 0) return v;
  dft(v, -1);
  for (int p = 0; p < n; ++p) v[p] *= sym(freq(p, n, h)) / static_cast<double>(n);
  dft(v, 1);
  return v;
}

void apply_multiplier2(const CVec& f1, const CVec& f2, double h, const std::function<Mat2(double)>& M, bool invert,
                       CVec& g1, CVec& g2) {
  if (f1.size() != f2.size()) fail(ErrorCode::InvalidArgument, "apply_multiplier2: size mismatch");
  const int n = static_cast<int>(f1.size());
  g1 = f1;
  g2 = f2;
  if (n == 0) return;
  dft(g1, -1);
  dft(g2, -1);
  for (int p = 0; p < n; ++p) {
    Mat2 a = M(freq(p, n, h));
    if (invert) {
      const cplx d = a[0] * a[3] - a[1] * a[2];
      a = {a[3] / d, -a[1] / d, -a[2] / d, a[0] / d};
    }
    const cplx u = g1[p], w = g2[p];
    g1[p] = (a[0] * u + a[1] * w) / static_cast<double>(n);
    g2[p] = (a[2] * u + a[3] * w) / static_cast<double>(n);
  }
  dft(g1, 1);
  dft(g2, 1);
}

CVec flat_solve_fft(const CVec& trace, double h, double m, double E) {
  check_single(m, E);
  check_decay(trace, "flat_solve_fft");
  CVec f(trace.size());
  for (size_t i = 0; i < f.size(); ++i) f[i] = 2.0 * m * trace[i];
  return apply_multiplier(f, h, [&](double xi) { return symbol_a_inv(xi, m, E); });
}

void flat_solve_fft2(const CVec& r1, const CVec& r2, double h, const Medium& md, CVec& sigma1, CVec& sigma2) {
  check_decay(r1, "flat_solve_fft2");
  check_decay(r2, "flat_solve_fft2");
  apply_multiplier2(r1, r2, h, [&](double xi) { return symbol_system2(xi, md); }, true, sigma1, sigma2);
}

std::vector<cplx> resample(const CVec& f, double t0, double h, const std::vector<double>& t) {
  const int n = static_cast<int>(f.size());
  CVec F = f;
  dft(F, -1);
  std::vector<cplx> out(t.size(), 0.0);
  for (size_t i = 0; i < t.size(); ++i) {
    const double s = t[i] - t0;
    cplx acc = 0.0;
    for (int p = 0; p < n; ++p) {
      if (2 * p == n) {
        acc += F[p] * std::cos(kPi * s / h);
        continue;
      }
      acc += F[p] * std::exp(kI * (freq(p, n, h) * s));
    }
    out[i] = acc / static_cast<double>(n);
  }
  return out;
}

cplx sommerfeld_field(Vec2 x, Vec2 src, double m, double E) {
  check_single(m, E);
  const double w = std::sqrt(m * m - E * E);
  const double X = x.x - src.x;
  const double Y = std::abs(x.y) + std::abs(src.y);
  if (Y < 0.05) fail(ErrorCode::Domain, "sommerfeld_field: points too close to the interface");
  auto F = [&](double xi) {
    const double k = std::sqrt(xi * xi + w * w);
    return m * std::exp(kI * (xi * X)) * std::exp(-k * Y) * (k + m) / (4.0 * kPi * k);
  };
  const double umax = E + 46.0 / Y;
  auto pv = [&](double c) {
    auto g = [&](double u) { return (F(c + u) - F(c - u)) / u; };
    cplx s = 0.0;
    const int pieces = static_cast<int>(std::ceil(umax / 0.5));
    for (int k = 0; k < pieces; ++k) s += adaptive_reference(g, umax * k / pieces, umax * (k + 1) / pieces, 1e-15);
    return s;
  };
  const cplx us = (pv(E) - pv(-E)) / (2.0 * E) + kI * (kPi / (2.0 * E)) * (F(E) + F(-E));
  return green(w, x, src) + us;
}

}  // namespace kgw::flat
