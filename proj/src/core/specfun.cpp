// SPDX-License-Identifier: Apache-2.0
#include "core/specfun.hpp"

#include <boost/math/policies/policy.hpp>
#include <boost/math/special_functions/bessel.hpp>

#include <cmath>
#include <string>

#include "core/common.hpp"

namespace kgw {

namespace {

using NoPromote = boost::math::policies::policy<boost::math::policies::promote_double<false>>;

double k_asymptotic_scaled(int nu, double x) {
  const double mu = 4.0 * nu * nu;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 40; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= (mu - odd * odd) / (k * 8.0 * x);
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return std::sqrt(kPi / (2.0 * x)) * sum;
}

void require_positive(double x, const char* what) {
  if (!(x > 0.0) || !std::isfinite(x)) fail(ErrorCode::Domain, std::string(what) + ": argument must be positive and finite");
}

}  // namespace

double bessel_k0(double x) {
  require_positive(x, "bessel_k0");
  if (x > 705.0) return 0.0;
  return boost::math::cyl_bessel_k(0, x, NoPromote());
}

double bessel_k1(double x) {
  require_positive(x, "bessel_k1");
  if (x > 705.0) return 0.0;
  return boost::math::cyl_bessel_k(1, x, NoPromote());
}

double bessel_k0_scaled(double x) {
  require_positive(x, "bessel_k0_scaled");
  if (x > 600.0) return k_asymptotic_scaled(0, x);
  return std::exp(x) * boost::math::cyl_bessel_k(0, x, NoPromote());
}

double bessel_k1_scaled(double x) {
  require_positive(x, "bessel_k1_scaled");
  if (x > 600.0) return k_asymptotic_scaled(1, x);
  return std::exp(x) * boost::math::cyl_bessel_k(1, x, NoPromote());
}

void bessel_k01(double x, double& k0, double& k1) {
  k0 = bessel_k0(x);
  k1 = bessel_k1(x);
}

double bessel_i0(double x) {
  if (!(x >= 0.0) || x > 50.0) fail(ErrorCode::Domain, "bessel_i0: argument outside [0, 50]");
  return boost::math::cyl_bessel_i(0, x, NoPromote());
}

double bessel_i1(double x) {
  if (!(x >= 0.0) || x > 50.0) fail(ErrorCode::Domain, "bessel_i1: argument outside [0, 50]");
  return boost::math::cyl_bessel_i(1, x, NoPromote());
}

double bessel_i1_over_z(double z) {
  if (z < 1e-3) {
    const double q = 0.25 * z * z;
    return 0.5 * (1.0 + q / 2.0 * (1.0 + q / 6.0 * (1.0 + q / 12.0)));
  }
  return bessel_i1(z) / z;
}

// z K1(z) - 1 = z ln(z/2) I1(z) - (z^2/4) sum_k (psi(k+1)+psi(k+2)) (z^2/4)^k / (k!(k+1)!)
double bessel_zk1_minus_one_over_z2(double z) {
  if (z >= 2.0) return (z * bessel_k1(z) - 1.0) / (z * z);
  if (z == 0.0) return -kPi;  // diverges logarithmically; callers never pass 0
  const double q = 0.25 * z * z;
  double psi1 = -kEulerGamma;        // psi(k+1)
  double psi2 = 1.0 - kEulerGamma;   // psi(k+2)
  double term = 1.0;                 // q^k / (k!(k+1)!)
  double sum = 0.0;
  for (int k = 0; k < 60; ++k) {
    const double add = (psi1 + psi2) * term;
    sum += add;
    if (std::abs(add) < 1e-18 * std::abs(sum) && k > 2) break;
    psi1 += 1.0 / (k + 1);
    psi2 += 1.0 / (k + 2);
    term *= q / ((k + 1.0) * (k + 2.0));
  }
  return std::log(0.5 * z) * bessel_i1_over_z(z) - 0.25 * sum;
}

GaussLegendre gauss_legendre(int n) {
  if (n < 1) fail(ErrorCode::InvalidArgument, "gauss_legendre: n must be >= 1");
  GaussLegendre g;
  g.n = n;
  g.x.resize(n);
  g.w.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) {
        // one more evaluation of the derivative at the converged node
        double q0 = 1.0, q1 = x;
        for (int k = 2; k <= n; ++k) {
          const double q2 = ((2.0 * k - 1.0) * x * q1 - (k - 1.0) * q0) / k;
          q0 = q1;
          q1 = q2;
        }
        if (n == 1) q0 = 1.0;
        dp = n * (x * q1 - q0) / (x * x - 1.0);
        break;
      }
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    g.x[n - 1 - i] = x;
    g.x[i] = -x;
    g.w[i] = w;
    g.w[n - 1 - i] = w;
  }
  if (n % 2 == 1) g.x[n / 2] = 0.0;
  return g;
}

const GaussLegendre& gauss_legendre_cached(int n) {
  static const GaussLegendre g16 = gauss_legendre(16);
  static const GaussLegendre g32 = gauss_legendre(32);
  if (n == 16) return g16;
  if (n == 32) return g32;
  fail(ErrorCode::InvalidArgument, "gauss_legendre_cached: only n = 16, 32");
}

void legendre_p_all(int nmax, double x, double* out) {
  out[0] = 1.0;
  if (nmax >= 1) out[1] = x;
  for (int k = 2; k <= nmax; ++k) out[k] = ((2.0 * k - 1.0) * x * out[k - 1] - (k - 1.0) * out[k - 2]) / k;
}

std::vector<double> legendre_coeffs(std::span<const double> samples) {
  const int n = static_cast<int>(samples.size());
  if (n != 16 && n != 32) fail(ErrorCode::InvalidArgument, "legendre_coeffs: expected 16 or 32 samples");
  const GaussLegendre& g = gauss_legendre_cached(n);
  std::vector<double> c(n, 0.0), p(n);
  for (int i = 0; i < n; ++i) {
    legendre_p_all(n - 1, g.x[i], p.data());
    for (int k = 0; k < n; ++k) c[k] += g.w[i] * samples[i] * p[k];
  }
  for (int k = 0; k < n; ++k) c[k] *= (2.0 * k + 1.0) / 2.0;
  return c;
}

double legendre_eval(std::span<const double> coeffs, double x) {
  const int n = static_cast<int>(coeffs.size());
  if (n == 0) return 0.0;
  // Clenshaw
  double b1 = 0.0, b2 = 0.0;
  for (int k = n - 1; k >= 1; --k) {
    const double alpha = (2.0 * k + 1.0) / (k + 1.0) * x;
    const double beta = -(k + 1.0) / (k + 2.0);
    const double b0 = coeffs[k] + alpha * b1 + beta * b2;
    b2 = b1;
    b1 = b0;
  }
  return coeffs[0] + x * b1 - 0.5 * b2;
}

}  // namespace kgw
