// SPDX-License-Identifier: Apache-2.0
#include "core/kernels.hpp"

#include <cmath>

#include "core/specfun.hpp"

namespace kgw {

namespace {
constexpr double kInv2Pi = 1.0 / (2.0 * kPi);
constexpr double kInv4Pi = 1.0 / (4.0 * kPi);
}  // namespace

double green(double omega, Vec2 x, Vec2 y) {
  const double r = norm(x - y);
  if (r == 0.0) fail(ErrorCode::Domain, "green: coincident points");
  return bessel_k0(omega * r) * kInv2Pi;
}

Vec2 grad_green(double omega, Vec2 x, Vec2 y) {
  const Vec2 d = x - y;
  const double r = norm(d);
  if (r == 0.0) fail(ErrorCode::Domain, "grad_green: coincident points");
  const double f = -omega * bessel_k1(omega * r) * kInv2Pi / r;
  return f * d;
}

double kernel_value(KernelKind kind, double omega, const PairGeom& g) {
  const double z = omega * g.r;
  switch (kind) {
    case KernelKind::S:
      return bessel_k0(z) * kInv2Pi;
    case KernelKind::D:
      return omega * bessel_k1(z) * kInv2Pi * dot(g.ns, g.d) / g.r;
    case KernelKind::Sp:
      return -omega * bessel_k1(z) * kInv2Pi * dot(g.nt, g.d) / g.r;
    case KernelKind::DpReg: {
      const double r2 = g.r * g.r;
      const double alpha = dot(g.nt, g.d) * dot(g.ns, g.d) / r2;
      const double beta = dot(g.nt, g.ns);
      const double w2 = omega * omega;
      return -kInv2Pi * (w2 * bessel_k0(z) * alpha + (2.0 * alpha - beta) * w2 * bessel_zk1_minus_one_over_z2(z));
    }
  }
  return 0.0;
}

void kernel_split(KernelKind kind, double omega, const PairGeom& g, double log_dt, double& A, double& B) {
  const double z = omega * g.r;
  const double w2 = omega * omega;
  if (z > 40.0) {
    A = 0.0;
    B = kernel_value(kind, omega, g);
    return;
  }
  switch (kind) {
    case KernelKind::S:
      A = -bessel_i0(z) * kInv2Pi;
      break;
    case KernelKind::D:
      A = kInv2Pi * dot(g.ns, g.d) * w2 * bessel_i1_over_z(z);
      break;
    case KernelKind::Sp:
      A = -kInv2Pi * dot(g.nt, g.d) * w2 * bessel_i1_over_z(z);
      break;
    case KernelKind::DpReg: {
      const double r2 = g.r * g.r;
      const double alpha = dot(g.nt, g.d) * dot(g.ns, g.d) / r2;
      const double beta = dot(g.nt, g.ns);
      A = -kInv2Pi * (-w2 * bessel_i0(z) * alpha + (2.0 * alpha - beta) * w2 * bessel_i1_over_z(z));
      break;
    }
  }
  B = kernel_value(kind, omega, g) - A * log_dt;
}

void kernel_diagonal(KernelKind kind, double omega, const NodeGeom& n, double& A, double& B) {
  const double lw = std::log(0.5 * omega * n.speed);
  switch (kind) {
    case KernelKind::S:
      A = -kInv2Pi;
      B = kInv2Pi * (-lw - kEulerGamma);
      break;
    case KernelKind::D:
    case KernelKind::Sp:
      A = 0.0;
      B = n.curv * kInv4Pi / (n.speed * n.speed);
      break;
    case KernelKind::DpReg:
      A = omega * omega * kInv4Pi;
      B = omega * omega * kInv4Pi * (lw + kEulerGamma - 0.5);
      break;
  }
}

KernelSum::KernelSum(std::vector<KernelTerm> terms) : terms_(std::move(terms)) {}

double KernelSum::value(const PairGeom& g) const {
  double v = 0.0;
  for (const KernelTerm& k : terms_) v += k.coef * kernel_value(k.kind, k.omega, g);
  return v;
}

void KernelSum::split(const PairGeom& g, double log_dt, double& A, double& B) const {
  A = 0.0;
  B = 0.0;
  for (const KernelTerm& k : terms_) {
    double a, b;
    kernel_split(k.kind, k.omega, g, log_dt, a, b);
    A += k.coef * a;
    B += k.coef * b;
  }
}

void KernelSum::diagonal(const NodeGeom& n, double& A, double& B) const {
  A = 0.0;
  B = 0.0;
  for (const KernelTerm& k : terms_) {
    double a, b;
    kernel_diagonal(k.kind, k.omega, n, a, b);
    A += k.coef * a;
    B += k.coef * b;
  }
}

double KernelSum::max_decay_length(double log_inv_eps) const {
  double wmin = 1e300;
  for (const KernelTerm& k : terms_) wmin = std::min(wmin, k.omega);
  return terms_.empty() ? 0.0 : log_inv_eps / wmin;
}

double pot_S(double omega, Vec2 x, Vec2 y) { return bessel_k0(omega * norm(x - y)) * kInv2Pi; }

Vec2 pot_grad_S(double omega, Vec2 x, Vec2 y) {
  const Vec2 d = x - y;
  const double r = norm(d);
  return (-omega * bessel_k1(omega * r) * kInv2Pi / r) * d;
}

double pot_D(double omega, Vec2 x, Vec2 y, Vec2 ny) {
  const Vec2 d = x - y;
  const double r = norm(d);
  return omega * bessel_k1(omega * r) * kInv2Pi * dot(ny, d) / r;
}

// grad_x [n_y . grad_y g(|x-y|)] = -Hess g . n_y
Vec2 pot_grad_D(double omega, Vec2 x, Vec2 y, Vec2 ny) {
  const Vec2 d = x - y;
  const double r = norm(d);
  const double z = omega * r;
  const double k0 = bessel_k0(z), k1 = bessel_k1(z);
  const double gp = -omega * k1 * kInv2Pi;                      // g'
  const double gpp = omega * omega * (k0 + k1 / z) * kInv2Pi;   // g''
  const Vec2 u = (1.0 / r) * d;
  const double nu = dot(ny, u);
  const Vec2 h = (gpp * nu) * u + (gp / r) * (ny - nu * u);
  return -1.0 * h;
}

}  // namespace kgw
