// SPDX-License-Identifier: Apache-2.0
#include "core/krylov.hpp"

#include <chrono>
#include <cmath>

namespace kgw {

namespace {

cplx dotc(const CVec& a, const CVec& b) {
  cplx s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

double nrm(const CVec& a) {
  double s = 0.0;
  for (const cplx& v : a) s += std::norm(v);
  return std::sqrt(s);
}

}  // namespace

CVec gmres(const LinearMap& A, const CVec& rhs, double tol, int max_iter, GmresReport& rep, bool check_orth) {
  if (!(tol > 0.0)) fail(ErrorCode::InvalidArgument, "gmres: tol must be positive");
  const auto t0 = std::chrono::steady_clock::now();
  const size_t n = rhs.size();
  rep = GmresReport{};
  CVec x(n, 0.0);
  const double beta = nrm(rhs);
  rep.residuals.push_back(beta == 0.0 ? 0.0 : 1.0);
  if (beta == 0.0) {
    rep.converged = true;
    return x;
  }
  std::vector<CVec> Q;
  Q.reserve(max_iter + 1);
  CVec q0(n);
  for (size_t i = 0; i < n; ++i) q0[i] = rhs[i] / beta;
  Q.push_back(std::move(q0));
  std::vector<std::vector<cplx>> H;  // columns of the Hessenberg matrix after rotation
  std::vector<cplx> cs, sn;
  std::vector<cplx> g{beta};
  int k = 0;
  for (; k < max_iter; ++k) {
    CVec w(n);
    A(Q[k].data(), w.data());
    const double wnorm0 = nrm(w);
    std::vector<cplx> h(k + 2, 0.0);
    for (int pass = 0; pass < 2; ++pass) {
      for (int i = 0; i <= k; ++i) {
        const cplx c = dotc(Q[i], w);
        h[i] += c;
        for (size_t r = 0; r < n; ++r) w[r] -= c * Q[i][r];
      }
      // reorthogonalize only after severe cancellation
      if (nrm(w) > 0.7071 * wnorm0) break;
    }
    const double hn = nrm(w);
    h[k + 1] = hn;
    for (int i = 0; i < k; ++i) {
      const cplx a = h[i], b = h[i + 1];
      h[i] = cs[i] * a + sn[i] * b;
      h[i + 1] = -std::conj(sn[i]) * a + cs[i] * b;
    }
    const double den = std::hypot(std::abs(h[k]), std::abs(h[k + 1]));
    cplx c, s;
    if (den == 0.0) {
      c = 1.0;
      s = 0.0;
    } else if (std::abs(h[k]) == 0.0) {
      c = 0.0;
      s = h[k + 1] / std::abs(h[k + 1]);
    } else {
      c = std::abs(h[k]) / den;
      s = (h[k] / std::abs(h[k])) * std::conj(h[k + 1]) / den;
    }
    cs.push_back(c);
    sn.push_back(s);
    h[k] = c * h[k] + s * h[k + 1];
    h[k + 1] = 0.0;
    g.push_back(-std::conj(s) * g[k]);
    g[k] = c * g[k];
    H.push_back(h);
    const double res = std::abs(g[k + 1]) / beta;
    rep.residuals.push_back(res);
    const bool happy = hn <= 1e-14 * wnorm0;
    if (res <= tol || happy) {
      rep.converged = true;
      ++k;
      break;
    }
    CVec qn(n);
    for (size_t r = 0; r < n; ++r) qn[r] = w[r] / hn;
    Q.push_back(std::move(qn));
  }
  rep.iterations = k;
  // back substitution
  std::vector<cplx> y(k, 0.0);
  for (int i = k - 1; i >= 0; --i) {
    cplx s = g[i];
    for (int j = i + 1; j < k; ++j) s -= H[j][i] * y[j];
    y[i] = s / H[i][i];
  }
  for (int j = 0; j < k; ++j)
    for (size_t r = 0; r < n; ++r) x[r] += y[j] * Q[j][r];
  if (check_orth) {
    double worst = 0.0;
    for (size_t i = 0; i < Q.size(); ++i)
      for (size_t j = 0; j <= i; ++j) {
        const cplx v = dotc(Q[i], Q[j]) - (i == j ? 1.0 : 0.0);
        worst = std::max(worst, std::abs(v));
      }
    rep.orthogonality = worst;
  }
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return x;
}

}  // namespace kgw
