// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

namespace kgw {

// Modified Bessel functions, real argument.
double bessel_k0(double x);
double bessel_k1(double x);
double bessel_k0_scaled(double x);  // e^x K0(x)
double bessel_k1_scaled(double x);  // e^x K1(x)
double bessel_i0(double x);         // 0 <= x <= 50
double bessel_i1(double x);

// K0 and K1 together; x > 0.
void bessel_k01(double x, double& k0, double& k1);

// (z K1(z) - 1) / z^2 and I1(z)/z, both smooth through z = 0.
double bessel_zk1_minus_one_over_z2(double z);
double bessel_i1_over_z(double z);

struct GaussLegendre {
  int n = 0;
  std::vector<double> x;
  std::vector<double> w;
};

GaussLegendre gauss_legendre(int n);
const GaussLegendre& gauss_legendre_cached(int n);  // n in {16, 32}

// P_0..P_nmax at x.
void legendre_p_all(int nmax, double x, double* out);

// Samples at the n-point Gauss-Legendre nodes -> Legendre coefficients c_0..c_{n-1}.
std::vector<double> legendre_coeffs(std::span<const double> samples);
double legendre_eval(std::span<const double> coeffs, double x);

}  // namespace kgw
