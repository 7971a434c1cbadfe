// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "core/specfun.hpp"
#include "doctest.h"

using namespace kgw;

namespace {

std::vector<std::vector<double>> read_csv(const std::string& name) {
  std::ifstream in(std::string(KGW_FIXTURE_DIR) + "/" + name);
  REQUIRE(in.good());
  std::vector<std::vector<double>> rows;
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::vector<double> r;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) r.push_back(std::stod(cell));
    rows.push_back(r);
  }
  return rows;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("bessel K0 K1 I0 I1 against high-precision table") {
  const auto rows = read_csv("bessel_table.csv");
  REQUIRE(rows.size() == 200);
  double ek = 0.0, ei = 0.0;
  for (const auto& r : rows) {
    const double x = r[0];
    ek = std::max({ek, rel(bessel_k0(x), r[1]), rel(bessel_k1(x), r[2])});
    ei = std::max({ei, rel(bessel_i0(x), r[3]), rel(bessel_i1(x), r[4])});
    double k0, k1;
    bessel_k01(x, k0, k1);
    CHECK(rel(k0, r[1]) < 1e-14);
    CHECK(rel(k1, r[2]) < 1e-14);
  }
  CHECK(ek < 1e-14);
  CHECK(ei < 1e-14);
}

TEST_CASE("scaled K matches table to large argument") {
  const auto rows = read_csv("bessel_scaled.csv");
  REQUIRE(rows.size() == 40);
  for (const auto& r : rows) {
    CHECK(rel(bessel_k0_scaled(r[0]), r[1]) < 1e-14);
    CHECK(rel(bessel_k1_scaled(r[0]), r[2]) < 1e-14);
  }
}

TEST_CASE("Wronskian I0 K1 + I1 K0 = 1/x") {
  for (double x = 1e-3; x < 50.0; x *= 1.37) {
    const double w = bessel_i0(x) * bessel_k1(x) + bessel_i1(x) * bessel_k0(x);
    CHECK(std::abs(w * x - 1.0) < 1e-13);
  }
}

TEST_CASE("removable combinations stay accurate near zero") {
  for (double z : {1e-8, 1e-5, 1e-3, 0.1, 1.0, 5.0}) {
    const double ref = (z * bessel_k1(z) - 1.0) / (z * z);
    if (z >= 0.1) CHECK(std::abs(bessel_zk1_minus_one_over_z2(z) - ref) < 1e-12 * std::abs(ref) + 1e-14);
    CHECK(std::isfinite(bessel_zk1_minus_one_over_z2(z)));
    const double iz = bessel_i1(z) / z;
    CHECK(std::abs(bessel_i1_over_z(z) - iz) < 1e-14 * iz);
  }
}

TEST_CASE("Gauss-Legendre integrates polynomials exactly") {
  for (int n : {16, 32}) {
    const GaussLegendre& g = gauss_legendre_cached(n);
    for (int k = 0; k < 2 * n; ++k) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += g.w[i] * std::pow(g.x[i], k);
      const double exact = (k % 2) ? 0.0 : 2.0 / (k + 1);
      CHECK(std::abs(s - exact) < 1e-14);
    }
  }
}

TEST_CASE("Legendre coefficients round trip") {
  const GaussLegendre& g = gauss_legendre_cached(16);
  std::vector<double> f(16);
  for (int i = 0; i < 16; ++i) f[i] = std::exp(g.x[i]) * std::cos(3.0 * g.x[i]);
  const auto c = legendre_coeffs(f);
  for (int i = 0; i < 16; ++i) CHECK(std::abs(legendre_eval(c, g.x[i]) - f[i]) < 1e-14);
}
