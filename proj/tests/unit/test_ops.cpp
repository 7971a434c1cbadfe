// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <random>

#include "core/h2matrix.hpp"
#include "core/kernels.hpp"
#include "core/krylov.hpp"
#include "core/ops.hpp"
#include "core/solver.hpp"
#include "doctest.h"

using namespace kgw;

namespace {

ProblemConfig curved(double m1, double m2) {
  ProblemConfig p;
  p.m1 = m1;
  p.m2 = m2;
  p.E = 1.0;
  p.curve.family = "gauss_sine";
  p.curve.params = {2.0, 0.05, 2.0, 0.4};
  p.sources = {PointSource{{0.0, 3.0}, 1.0, 0}};
  p.nc = 24;
  return p;
}

Eigen::VectorXcd random_vector(int n, std::mt19937& g) {
  std::normal_distribution<double> nd;
  Eigen::VectorXcd v(n);
  for (int i = 0; i < n; ++i) v[i] = cplx(nd(g), nd(g));
  return v;
}

}  // namespace

TEST_CASE("Green's function symmetry and gradient") {
  const Vec2 x{0.3, -1.2}, y{-2.0, 0.7};
  CHECK(green(1.5, x, y) == doctest::Approx(green(1.5, y, x)).epsilon(1e-15));
  const double h = 1e-6;
  const Vec2 g = grad_green(1.5, x, y);
  CHECK(std::abs((green(1.5, {x.x + h, x.y}, y) - green(1.5, {x.x - h, x.y}, y)) / (2 * h) - g.x) < 1e-8);
  CHECK(std::abs((green(1.5, {x.x, x.y + h}, y) - green(1.5, {x.x, x.y - h}, y)) / (2 * h) - g.y) < 1e-8);
}

TEST_CASE("hierarchical layer operator matches dense assembly") {
  const ProblemConfig p = curved(2.0, 2.0);
  const Medium md = make_medium(p);
  const Boundary bd = build_boundary(p, md);
  OpOptions fast, plain;
  plain.fast = false;
  fast.eps_trunc = plain.eps_trunc = 0.0;
  const SingleMassSystem a(bd, md, fast), b(bd, md, plain);
  const Eigen::MatrixXcd D = a.dense_L();
  std::mt19937 g(7);
  for (int r = 0; r < 3; ++r) {
    const Eigen::VectorXcd x = random_vector(bd.n_over(), g);
    Eigen::VectorXcd ya(bd.n_core()), yb(bd.n_core());
    a.apply_L(x.data(), ya.data());
    b.apply_L(x.data(), yb.data());
    const Eigen::VectorXcd z = D * x;
    CHECK((ya - z).norm() / z.norm() < 1e-12);
    CHECK((yb - z).norm() / z.norm() < 1e-13);
  }
  CHECK(a.L().hstats().n_coupling_blocks > 0);
}

TEST_CASE("Q sweep equals dense Q and P = I + Q") {
  const ProblemConfig p = curved(2.0, 2.0);
  const Medium md = make_medium(p);
  const Boundary bd = build_boundary(p, md);
  const SingleMassSystem s(bd, md, OpOptions{});
  const Eigen::MatrixXcd Q = s.Q().dense();
  const Eigen::MatrixXcd P = s.dense_P();
  std::mt19937 g(3);
  const Eigen::VectorXcd x = random_vector(bd.n_core(), g);
  Eigen::VectorXcd y(bd.n_over()), mu(bd.n_over());
  s.apply_Q(x.data(), y.data());
  s.apply_P(x.data(), mu.data());
  CHECK((y - Q * x).norm() / (Q * x).norm() < 1e-12);
  CHECK((mu - P * x).norm() / (P * x).norm() < 1e-12);
  Eigen::VectorXcd id = mu - y;
  for (int i = 0; i < bd.n_core(); ++i) id[bd.core_begin + i] -= x[i];
  CHECK(id.norm() < 1e-12 * x.norm());
}

TEST_CASE("two-mass operators match dense assembly") {
  const ProblemConfig p = curved(2.0, 3.0);
  const Medium md = make_medium(p);
  const Boundary bd = build_boundary(p, md);
  const TwoMassSystem s(bd, md, OpOptions{});
  const Eigen::MatrixXcd L = s.dense_L2(), P = s.dense_P2();
  std::mt19937 g(5);
  const Eigen::VectorXcd x = random_vector(2 * bd.n_over(), g);
  Eigen::VectorXcd y(2 * bd.n_core());
  s.apply_L2(x.data(), y.data());
  CHECK((y - L * x).norm() / (L * x).norm() < 1e-12);
  const Eigen::VectorXcd sg = random_vector(2 * bd.n_core(), g);
  Eigen::VectorXcd mr(2 * bd.n_over());
  s.apply_P2(sg.data(), mr.data());
  CHECK((mr - P * sg).norm() / (P * sg).norm() < 1e-12);
  const auto V = s.V(), Vi = s.Vinv();
  CHECK(std::abs(V[0] * Vi[0] + V[1] * Vi[2] - 1.0) < 1e-15);
  CHECK(std::abs(V[0] * Vi[1] + V[1] * Vi[3]) < 1e-15);
}

TEST_CASE("H2 matrix on a smooth kernel") {
  const int n = 600;
  H2Points pts;
  for (int i = 0; i < n; ++i) {
    const double t = -15.0 + 30.0 * (i + 0.5) / n;
    pts.t.push_back(t);
    pts.pos.push_back({t, std::sin(t)});
    pts.panel.push_back(i / 16);
    pts.weight.push_back(30.0 / n);
  }
  auto kern = [](Vec2 a, Vec2 b) { return std::exp(-norm(a - b)); };
  auto entry = [&](int i, int l) {
    return std::abs(pts.panel[i] - pts.panel[l]) <= 1 ? 0.0 : kern(pts.pos[i], pts.pos[l]) * pts.weight[l];
  };
  H2Options o;
  const H2Matrix H(
      pts, pts, entry, [](double t) { return H2Matrix::GeoPoint{{t, std::sin(t)}, {0.0, 1.0}}; },
      [&](const H2Matrix::GeoPoint& a, const H2Matrix::GeoPoint& b) { return kern(a.pos, b.pos); }, o);
  std::mt19937 g(11);
  const Eigen::VectorXcd x = random_vector(n, g);
  Eigen::VectorXcd y = Eigen::VectorXcd::Zero(n), z = Eigen::VectorXcd::Zero(n);
  H.matvec_add(x.data(), y.data());
  for (int i = 0; i < n; ++i)
    for (int l = 0; l < n; ++l) z[i] += entry(i, l) * x[l];
  CHECK((y - z).norm() / z.norm() < 1e-11);
  CHECK(H.stats().n_coupling_blocks > 0);
}

TEST_CASE("GMRES solves a small nonsymmetric system") {
  const int n = 60;
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Identity(n, n);
  std::mt19937 g(1);
  std::normal_distribution<double> nd;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) += cplx(nd(g), nd(g)) * (0.3 / n);
  CVec b(n);
  for (auto& v : b) v = cplx(nd(g), nd(g));
  GmresReport rep;
  const CVec x = gmres(
      [&](const cplx* in, cplx* out) {
        Eigen::Map<const Eigen::VectorXcd> X(in, n);
        Eigen::Map<Eigen::VectorXcd> Y(out, n);
        Y = A * X;
      },
      b, 1e-13, 200, rep, true);
  CHECK(rep.converged);
  CHECK(rep.orthogonality < 1e-12);
  Eigen::Map<const Eigen::VectorXcd> X(x.data(), n), B(b.data(), n);
  CHECK((A * X - B).norm() / B.norm() < 1e-12);
  for (size_t i = 1; i < rep.residuals.size(); ++i) CHECK(rep.residuals[i] <= rep.residuals[i - 1] * (1 + 1e-12));
}
