// SPDX-License-Identifier: Apache-2.0
#include <cmath>

#include "core/geom.hpp"
#include "core/quad.hpp"
#include "core/specfun.hpp"
#include "doctest.h"

using namespace kgw;

TEST_CASE("GaussSine evaluation") {
  const Curve c = build_curve(CurveFamily::GaussSine, {2.0, 0.05, 2.0, 0.4});
  const CurvePoint p = c.eval(0.0);
  CHECK(p.pos.x == doctest::Approx(0.0));
  CHECK(std::abs(p.pos.y - 2.0 * std::sin(0.4)) < 1e-15);
  // derivatives against central differences
  for (double t : {-3.1, -0.7, 0.0, 1.3, 4.2}) {
    const double h = 1e-5;
    const CurvePoint a = c.eval(t - h), b = c.eval(t + h), q = c.eval(t);
    CHECK(std::abs((b.pos.y - a.pos.y) / (2 * h) - q.d1.y) < 1e-8);
    CHECK(std::abs((b.d1.y - a.d1.y) / (2 * h) - q.d2.y) < 1e-7);
    CHECK(std::abs(norm(q.normal) - 1.0) < 1e-15);
    CHECK(std::abs(q.normal.x * q.d1.x + q.normal.y * q.d1.y) < 1e-14);
  }
}

TEST_CASE("flat curve normal points up") {
  const Curve c = build_curve(CurveFamily::Flat, {});
  const CurvePoint p = c.eval(2.0);
  CHECK(p.normal.x == doctest::Approx(0.0));
  CHECK(p.normal.y == doctest::Approx(1.0));
  CHECK(p.speed == doctest::Approx(1.0));
}

TEST_CASE("vshape tends to its asymptotic slopes") {
  const Curve c = build_curve(CurveFamily::VShape, {-0.5, 1.0, 0.3});
  CHECK(std::abs(c.eval(-30.0).d1.y + 0.5) < 1e-12);
  CHECK(std::abs(c.eval(30.0).d1.y - 1.0) < 1e-12);
}

TEST_CASE("invalid curve parameters are config errors") {
  CHECK_THROWS_AS(build_curve(CurveFamily::GaussSine, {1.0, -0.1, 2.0, 0.0}), Error);
  CHECK_THROWS_AS(build_curve(CurveFamily::VShape, {1.0, 2.0}), Error);
  try {
    build_curve(CurveFamily::GaussSine, {1.0});
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Config);
  }
}

TEST_CASE("adaptive chunking refines where curvature is large") {
  const Curve c = build_curve(CurveFamily::GaussSine, {2.0, 0.05, 2.0, 0.4});
  ChunkOptions o;
  o.eps = 1e-10;
  const auto br = adaptive_chunk(c, -15.0, 15.0, o);
  REQUIRE(br.size() > 2);
  double center = 1e300, edge = 0.0;
  for (size_t i = 0; i + 1 < br.size(); ++i) {
    const double mid = 0.5 * (br[i] + br[i + 1]), len = br[i + 1] - br[i];
    if (std::abs(mid) < 2.0) center = std::min(center, len);
    if (std::abs(mid) > 12.0) edge = std::max(edge, len);
  }
  CHECK(center < edge);
  for (size_t i = 0; i + 1 < br.size(); ++i) CHECK(resolution_tail(c, br[i], br[i + 1]) <= 1e-10);
  // tighter tolerance never gives fewer panels
  o.eps = 1e-12;
  CHECK(adaptive_chunk(c, -15.0, 15.0, o).size() >= br.size());
  // balanced: neighbours differ by at most a factor of two
  const auto bal = balance_chunks(br);
  for (size_t i = 1; i + 1 < bal.size(); ++i) {
    const double l0 = bal[i] - bal[i - 1], l1 = bal[i + 1] - bal[i];
    CHECK(std::max(l0, l1) <= 2.0 * std::min(l0, l1) * (1 + 1e-12));
  }
}

TEST_CASE("buffered boundary layout") {
  const Curve c = build_curve(CurveFamily::Flat, {});
  BufferSpec s;
  s.nc = 16;
  s.omega0 = std::sqrt(3.0);
  const Boundary bd = extend_with_buffers(c, uniform_chunk(-10.0, 10.0, 16), s);
  CHECK(bd.n_core() == 16 * kNodesPerPanel);
  CHECK(bd.n_over() == bd.n_panels() * kNodesPerPanel);
  CHECK(bd.ap < bd.a);
  CHECK(bd.bp > bd.b);
  CHECK(bd.a == doctest::Approx(-10.0));
  double wsum = 0.0;
  for (int j = 0; j < bd.n_over(); ++j) wsum += bd.weight[j];
  CHECK(std::abs(wsum - (bd.bp - bd.ap)) < 1e-11);
  for (int j = 0; j < bd.n_over(); ++j) CHECK(std::abs(bd.sigma[j] - bd.t[j]) < 1e-11);
  for (int p = 0; p < bd.n_panels(); ++p)
    CHECK(bd.panels[p].buffer == (p < bd.core_panel_begin || p >= bd.core_panel_end));
}

TEST_CASE("smaller tau gives shorter buffers") {
  const Curve c = build_curve(CurveFamily::Flat, {});
  BufferSpec a, b;
  a.tau = 1.0;
  b.tau = 0.25;
  a.nc = b.nc = 16;
  CHECK(buffer_panels_per_side(b, 20.0) < buffer_panels_per_side(a, 20.0));
}

TEST_CASE("log-corrected weights integrate p(s) log|t - s|") {
  for (double t : {-0.9, 0.13, 0.5, 1.2}) {
    const double a = -1.0, b = 1.5;
    const Weights16 w = log_corrected_weights(a, b, t);
    const GaussLegendre& g = gauss_legendre_cached(16);
    for (int k : {0, 3, 9, 15}) {
      double s = 0.0;
      for (int i = 0; i < 16; ++i) s += w[i] * std::pow(a + 0.5 * (b - a) * (g.x[i] + 1.0), k);
      auto f = [&](double x) { return std::pow(x, k) * std::log(std::abs(t - x)); };
      // x = t + (e - t) v^4 flattens the logarithm at v = 0
      auto side = [&](double e) {
        if (e == t) return 0.0;
        auto g = [&](double v) {
          const double x = t + (e - t) * std::pow(v, 4);
          return std::pow(x, k) * (std::log(std::abs(e - t)) + 4.0 * std::log(v)) * 4.0 * std::pow(v, 3) * (e - t);
        };
        return adaptive_reference_real(g, 0.0, 1.0, 1e-15);
      };
      double ref = 0.0;
      if (t >= a && t <= b)
        ref = side(b) - side(a);
      else
        ref = adaptive_reference_real(f, a, b, 1e-15);
      CHECK(std::abs(s - ref) < 1e-12 * std::max(1.0, std::abs(ref)));
    }
  }
}

TEST_CASE("kink moments agree with split quadrature") {
  const double a = 0.2, b = 0.9, E = 1.7;
  for (double t : {0.2, 0.41, 0.9}) {
    const CWeights16 k = kink_exact_moments(a, b, t, E);
    const CWeights16 m = moment_weights(a, b, t, 0.05, [&](double s) { return std::exp(kI * (E * std::abs(t - s))); });
    for (int i = 0; i < 16; ++i) CHECK(std::abs(k[i] - m[i]) < 1e-13);
  }
}

TEST_CASE("adaptive reference quadrature") {
  const cplx v = adaptive_reference([](double x) { return std::exp(kI * x) / (1.0 + x * x); }, -50.0, 50.0, 1e-14);
  const double ref = kPi * std::exp(-1.0);
  CHECK(std::abs(v.real() - ref) < 1e-3);  // truncated tails are O(1/50^2)
  CHECK(std::abs(v.imag()) < 1e-13);
  CHECK(std::abs(adaptive_reference_real([](double x) { return std::sqrt(x); }, 0.0, 1.0, 1e-15) - 2.0 / 3.0) < 1e-13);
}
