// SPDX-License-Identifier: Apache-2.0
#include "core/quad.hpp"

#include <cmath>

#include "core/specfun.hpp"

namespace kgw {

namespace {

// Legendre functions of the second kind Q_0..Q_17 at x.
void legendre_q_all(double x, double* q) {
  constexpr int N = 17;
  const double ax = std::abs(x);
  const double rho = ax > 1.0 ? ax + std::sqrt(ax * ax - 1.0) : 1.0;
  if (ax < 1.0 || rho <= 1.3) {
    q[0] = 0.5 * std::log(std::abs((1.0 + x) / (1.0 - x)));
    q[1] = x * q[0] - 1.0;
    for (int n = 1; n < N; ++n) q[n + 1] = ((2.0 * n + 1.0) * x * q[n] - n * q[n - 1]) / (n + 1.0);
    return;
  }
  // Miller backward recurrence on |x|, normalized by Q_0
  const int top = N + 16 + static_cast<int>(std::ceil(40.0 / std::log(rho)));
  double qn1 = 0.0, qn = 1e-30;
  std::vector<double> buf(top + 2, 0.0);
  buf[top + 1] = qn1;
  buf[top] = qn;
  for (int n = top; n >= 1; --n) {
    const double prev = ((2.0 * n + 1.0) * ax * buf[n] - (n + 1.0) * buf[n + 1]) / n;
    buf[n - 1] = prev;
    if (std::abs(prev) > 1e250) {
      for (int k = n - 1; k <= top + 1; ++k) buf[k] *= 1e-250;
    }
  }
  const double q0 = 0.5 * std::log((ax + 1.0) / (ax - 1.0));
  const double scale = q0 / buf[0];
  for (int n = 0; n <= N; ++n) {
    const double v = buf[n] * scale;
    // Q_n(-x) = (-1)^{n+1} Q_n(x)
    q[n] = (x < 0 && n % 2 == 0) ? -v : v;
  }
}

}  // namespace

std::array<double, 16> log_moments(double x0) {
  std::array<double, 16> m{};
  const double a = 1.0 + x0, b = 1.0 - x0;
  m[0] = (a != 0.0 ? a * std::log(std::abs(a)) : 0.0) + (b != 0.0 ? b * std::log(std::abs(b)) : 0.0) - 2.0;
  double q[18];
  legendre_q_all(x0, q);
  for (int k = 1; k < 16; ++k) m[k] = 2.0 / (2.0 * k + 1.0) * (q[k + 1] - q[k - 1]);
  return m;
}

Weights16 log_corrected_weights(double a, double b, double t) {
  const double h = b - a;
  if (!(h > 0.0)) fail(ErrorCode::InvalidArgument, "log_corrected_weights: empty panel");
  const double x0 = 2.0 * (t - a) / h - 1.0;
  if (std::abs(x0) > 7.0) fail(ErrorCode::InvalidArgument, "log_corrected_weights: target too far from panel");
  const GaussLegendre& g = gauss_legendre_cached(16);
  const std::array<double, 16> mom = log_moments(x0);
  const double lh = std::log(0.5 * h);
  Weights16 w{};
  double p[16];
  for (int l = 0; l < 16; ++l) {
    legendre_p_all(15, g.x[l], p);
    double acc = 0.0;
    for (int k = 0; k < 16; ++k) acc += 0.5 * (2.0 * k + 1.0) * p[k] * mom[k];
    w[l] = 0.5 * h * g.w[l] * (lh + acc);
  }
  return w;
}

CWeights16 moment_weights(double a, double b, double split, double max_piece,
                          const std::function<cplx(double)>& K) {
  const double h = b - a;
  const GaussLegendre& g16 = gauss_legendre_cached(16);
  const GaussLegendre& g32 = gauss_legendre_cached(32);
  std::array<cplx, 16> J{};
  double p[16];
  auto integrate_piece = [&](double lo, double hi) {
    if (!(hi > lo)) return;
    const int pieces = max_piece > 0.0 ? std::max(1, static_cast<int>(std::ceil((hi - lo) / max_piece))) : 1;
    const double d = (hi - lo) / pieces;
    for (int q = 0; q < pieces; ++q) {
      const double u0 = lo + q * d;
      for (int i = 0; i < 32; ++i) {
        const double s = u0 + 0.5 * d * (g32.x[i] + 1.0);
        const cplx kv = K(s) * (0.5 * d * g32.w[i]);
        legendre_p_all(15, 2.0 * (s - a) / h - 1.0, p);
        for (int k = 0; k < 16; ++k) J[k] += kv * p[k];
      }
    }
  };
  if (split > a && split < b) {
    integrate_piece(a, split);
    integrate_piece(split, b);
  } else {
    integrate_piece(a, b);
  }
  CWeights16 w{};
  for (int l = 0; l < 16; ++l) {
    legendre_p_all(15, g16.x[l], p);
    cplx acc = 0.0;
    for (int k = 0; k < 16; ++k) acc += 0.5 * (2.0 * k + 1.0) * p[k] * J[k];
    w[l] = g16.w[l] * acc;
  }
  return w;
}

CWeights16 kink_exact_moments(double a, double b, double t, double E) {
  if (E == 0.0) fail(ErrorCode::InvalidArgument, "kink_exact_moments: E must be nonzero");
  return moment_weights(a, b, t, 2.0 / std::abs(E), [&](double s) { return std::exp(kI * (E * std::abs(t - s))); });
}

namespace {

constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class T>
void gk15(const std::function<T(double)>& f, double a, double b, T& res, double& err, double& mag) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const T fc = f(c);
  T rk = fc * kWgk[7];
  T rg = fc * kWg[3];
  double ra = std::abs(fc) * kWgk[7];
  for (int j = 0; j < 7; ++j) {
    const T f1 = f(c - h * kXgk[j]);
    const T f2 = f(c + h * kXgk[j]);
    rk += (f1 + f2) * kWgk[j];
    ra += (std::abs(f1) + std::abs(f2)) * kWgk[j];
    if (j % 2 == 1) rg += (f1 + f2) * kWg[j / 2];
  }
  res = rk * h;
  err = std::abs((rk - rg) * h);
  mag = ra * std::abs(h);
}

template <class T>
T adaptive(const std::function<T(double)>& f, double a, double b, double tol, int depth, int max_depth) {
  T r;
  double e, mag;
  gk15<T>(f, a, b, r, e, mag);
  if (!std::isfinite(std::abs(r))) fail(ErrorCode::Domain, "adaptive_reference: non-finite integrand");
  if (!(e > tol) || e <= 1e-14 * mag || (b - a) < 1e-15 * std::max(1.0, std::abs(a))) return r;
  if (depth >= max_depth) fail(ErrorCode::Domain, "adaptive_reference: subdivision limit reached");
  const double m = 0.5 * (a + b);
  return adaptive<T>(f, a, m, 0.5 * tol, depth + 1, max_depth) + adaptive<T>(f, m, b, 0.5 * tol, depth + 1, max_depth);
}

}  // namespace

cplx adaptive_reference(const std::function<cplx(double)>& f, double a, double b, double tol, int max_depth) {
  if (!(tol > 0.0)) fail(ErrorCode::InvalidArgument, "adaptive_reference: tol must be positive");
  return adaptive<cplx>(f, a, b, tol, 0, max_depth);
}

double adaptive_reference_real(const std::function<double(double)>& f, double a, double b, double tol, int max_depth) {
  if (!(tol > 0.0)) fail(ErrorCode::InvalidArgument, "adaptive_reference: tol must be positive");
  return adaptive<double>(f, a, b, tol, 0, max_depth);
}

}  // namespace kgw
