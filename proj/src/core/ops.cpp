// SPDX-License-Identifier: Apache-2.0
#include "core/ops.hpp"

#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>

#include "core/parallel.hpp"
#include "core/quad.hpp"
#include "core/specfun.hpp"

namespace kgw {

Medium Medium::make(double m1, double m2, double E) {
  if (!(m1 > 0.0) || !(m2 > 0.0) || !std::isfinite(m1) || !std::isfinite(m2))
    fail(ErrorCode::Config, "masses: m1 and m2 must be positive");
  if (!std::isfinite(E) || E == 0.0) fail(ErrorCode::Config, "E: must be finite and nonzero");
  if (!(std::abs(E) < std::min(m1, m2))) fail(ErrorCode::Config, "E: requires |E| < min(m1, m2)");
  Medium md;
  md.m1 = m1;
  md.m2 = m2;
  md.E = E;
  md.w1 = std::sqrt(m1 * m1 - E * E);
  md.w2 = std::sqrt(m2 * m2 - E * E);
  md.mbar = 0.5 * (m1 + m2);
  return md;
}

namespace {

PairGeom pair(const Boundary& bd, int j, int l) {
  PairGeom g;
  g.d = bd.pos[j] - bd.pos[l];
  g.r = norm(g.d);
  g.nt = bd.normal[j];
  g.ns = bd.normal[l];
  return g;
}

double min_omega(const KernelSum& k) {
  double w = 1e300;
  for (const KernelTerm& t : k.terms()) w = std::min(w, t.omega);
  return w;
}

}  // namespace

void LayerOperator::near_row(const Boundary& bd, const KernelSum& k, int j, std::vector<int>& idx,
                             std::vector<double>& w) {
  idx.clear();
  w.clear();
  const GaussLegendre& g = gauss_legendre_cached(16);
  const int pj = bd.panel_of[j];
  const double wmin = min_omega(k);
  for (int q = std::max(0, pj - 1); q <= std::min(bd.n_panels() - 1, pj + 1); ++q) {
    const Panel& pn = bd.panels[q];
    const double h = pn.b - pn.a;
    bool smooth = false;
    if (q != pj) {
      double rmin = 1e300;
      for (int i = 0; i < kNodesPerPanel; ++i) rmin = std::min(rmin, norm(bd.pos[j] - bd.pos[pn.first + i]));
      smooth = wmin * rmin > 12.0;
    }
    if (smooth) {
      for (int i = 0; i < kNodesPerPanel; ++i) {
        const int l = pn.first + i;
        idx.push_back(l);
        w.push_back(k.value(pair(bd, j, l)) * bd.weight[l]);
      }
      continue;
    }
    const Weights16 lw = log_corrected_weights(pn.a, pn.b, bd.t[j]);
    for (int i = 0; i < kNodesPerPanel; ++i) {
      const int l = pn.first + i;
      double A, B;
      if (l == j) {
        k.diagonal(NodeGeom{bd.speed[j], bd.curv[j]}, A, B);
      } else {
        k.split(pair(bd, j, l), std::log(std::abs(bd.t[j] - bd.t[l])), A, B);
      }
      idx.push_back(l);
      w.push_back((A * lw[i] + B * 0.5 * h * g.w[i]) * bd.speed[l]);
    }
  }
}

LayerOperator::LayerOperator(const Boundary& bd, KernelSum k, const OpOptions& opt)
    : bd_(&bd), k_(std::move(k)), opt_(opt) {
  if (opt_.eps_trunc > 0.0) cutoff_ = std::log(1.0 / opt_.eps_trunc) / min_omega(k_);
  const int nc = bd.n_core();
  std::vector<std::vector<int>> ridx(nc);
  std::vector<std::vector<double>> rval(nc);
  parallel_for(nc, [&](int i) { near_row(bd, k_, bd.core_begin + i, ridx[i], rval[i]); });
  row_ptr_.assign(nc + 1, 0);
  for (int i = 0; i < nc; ++i) row_ptr_[i + 1] = row_ptr_[i] + static_cast<int>(ridx[i].size());
  col_.resize(row_ptr_[nc]);
  val_.resize(row_ptr_[nc]);
  for (int i = 0; i < nc; ++i) {
    std::copy(ridx[i].begin(), ridx[i].end(), col_.begin() + row_ptr_[i]);
    std::copy(rval[i].begin(), rval[i].end(), val_.begin() + row_ptr_[i]);
  }
  if (opt_.fast) {
    auto points = [&](int b, int e) {
      H2Points p;
      p.t.assign(bd.t.begin() + b, bd.t.begin() + e);
      p.pos.assign(bd.pos.begin() + b, bd.pos.begin() + e);
      p.panel.assign(bd.panel_of.begin() + b, bd.panel_of.begin() + e);
      p.weight.assign(bd.weight.begin() + b, bd.weight.begin() + e);
      return p;
    };
    H2Options h = opt_.h;
    h.cutoff = cutoff_;
    h.panel_gap = 1;
    h.breaks = bd.curve.breakpoints();
    const Curve& curve = bd.curve;
    far_ = H2Matrix(
        points(bd.core_begin, bd.core_end), points(0, bd.n_over()),
        [this](int i, int l) { return far_entry(bd_->core_begin + i, l); },
        [&curve](double t) {
          const CurvePoint c = curve.eval(t);
          return H2Matrix::GeoPoint{c.pos, c.normal};
        },
        [this](const H2Matrix::GeoPoint& x, const H2Matrix::GeoPoint& y) {
          PairGeom g;
          g.d = x.pos - y.pos;
          g.r = norm(g.d);
          g.nt = x.normal;
          g.ns = y.normal;
          return k_.value(g);
        },
        h);
  } else {
    plain_ = Eigen::MatrixXd::Zero(nc, bd.n_over());
    parallel_for(nc, [&](int i) {
      const int j = bd.core_begin + i;
      for (int l = 0; l < bd.n_over(); ++l)
        if (norm(bd.pos[j] - bd.pos[l]) <= cutoff_) plain_(i, l) = far_entry(j, l);
    });
  }
}

double LayerOperator::far_entry(int j, int l) const {
  if (std::abs(bd_->panel_of[j] - bd_->panel_of[l]) <= 1) return 0.0;
  return k_.value(pair(*bd_, j, l)) * bd_->weight[l];
}

void LayerOperator::apply_add(const cplx* x, cplx* y) const {
  const int nc = bd_->n_core();
  parallel_for_static(nc, [&](int i, int) {
    cplx acc = 0.0;
    for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) acc += val_[p] * x[col_[p]];
    y[i] += acc;
  });
  if (opt_.fast) {
    far_.matvec_add(x, y);
  } else {
    using RowMat2 = Eigen::Matrix<double, Eigen::Dynamic, 2, Eigen::RowMajor>;
    Eigen::Map<const RowMat2> X(reinterpret_cast<const double*>(x), bd_->n_over(), 2);
    Eigen::Map<RowMat2> Y(reinterpret_cast<double*>(y), nc, 2);
    Y.noalias() += plain_ * X;
  }
}

Eigen::MatrixXd LayerOperator::dense() const {
  const int nc = bd_->n_core(), n = bd_->n_over();
  if (n > 6000) fail(ErrorCode::InvalidArgument, "dense_assemble: n_over exceeds 6000");
  Eigen::MatrixXd A(nc, n);
  parallel_for(nc, [&](int i) {
    for (int l = 0; l < n; ++l) A(i, l) = far_entry(bd_->core_begin + i, l);
    for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) A(i, col_[p]) += val_[p];
  });
  return A;
}

// ---------------------------------------------------------------------------

std::array<cplx, 16> QOperator::kink_weights(const Boundary& bd, int j, double E) {
  const int p = bd.panel_of[j];
  const Panel& pn = bd.panels[p];
  double smax = 0.0;
  for (int i = 0; i < kNodesPerPanel; ++i) smax = std::max(smax, bd.speed[pn.first + i]);
  const double piece = 1.0 / (std::abs(E) * smax * 1.5);
  const double sj = bd.sigma[j];
  return moment_weights(pn.a, pn.b, bd.t[j], piece, [&](double t) {
    const double sig = bd.sigma_at(p, t);
    return std::exp(kI * (E * std::abs(sj - sig))) * bd.curve.eval(t).speed;
  });
}

QOperator::QOperator(const Boundary& bd, double E, double prefactor) : bd_(&bd), E_(E), c_(prefactor) {
  if (E == 0.0) fail(ErrorCode::InvalidArgument, "Q: E must be nonzero");
  const int nc = bd.n_core();
  corr_.resize(nc);
  parallel_for(nc, [&](int i) {
    const int j = bd.core_begin + i;
    std::array<cplx, 16> w = kink_weights(bd, j, E_);
    const Panel& pn = bd.panels[bd.panel_of[j]];
    for (int q = 0; q < kNodesPerPanel; ++q) {
      const int l = pn.first + q;
      w[q] -= std::exp(kI * (E_ * std::abs(bd.sigma[j] - bd.sigma[l]))) * bd.weight[l];
    }
    corr_[i] = w;
  });
}

void QOperator::apply(const cplx* rho, cplx* out) const {
  const Boundary& bd = *bd_;
  const int n = bd.n_over();
  const int cb = bd.core_begin, ce = bd.core_end;
  auto src = [&](int l) -> cplx { return (l >= cb && l < ce) ? rho[l - cb] * bd.weight[l] : cplx(0.0); };
  // upward pass
  cplx up = 0.0;
  for (int j = 0; j < n; ++j) {
    if (j > 0) up *= std::exp(kI * (E_ * (bd.sigma[j] - bd.sigma[j - 1])));
    up += src(j);
    out[j] = up;
  }
  cplx down = 0.0;
  for (int j = n - 2; j >= 0; --j) {
    down = std::exp(kI * (E_ * (bd.sigma[j + 1] - bd.sigma[j]))) * (down + src(j + 1));
    out[j] += down;
  }
  for (int j = 0; j < n; ++j) out[j] *= c_;
  for (int i = 0; i < bd.n_core(); ++i) {
    const int j = cb + i;
    const Panel& pn = bd.panels[bd.panel_of[j]];
    cplx acc = 0.0;
    for (int q = 0; q < kNodesPerPanel; ++q) acc += corr_[i][q] * rho[pn.first + q - cb];
    out[j] += c_ * acc;
  }
}

Eigen::MatrixXcd QOperator::dense() const {
  const Boundary& bd = *bd_;
  const int n = bd.n_over(), nc = bd.n_core();
  if (n > 6000) fail(ErrorCode::InvalidArgument, "dense_assemble: n_over exceeds 6000");
  Eigen::MatrixXcd A(n, nc);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < nc; ++i) {
      const int l = bd.core_begin + i;
      A(j, i) = c_ * std::exp(kI * (E_ * std::abs(bd.sigma[j] - bd.sigma[l]))) * bd.weight[l];
    }
  for (int i = 0; i < nc; ++i) {
    const int j = bd.core_begin + i;
    const Panel& pn = bd.panels[bd.panel_of[j]];
    for (int q = 0; q < kNodesPerPanel; ++q) A(j, pn.first + q - bd.core_begin) += c_ * corr_[i][q];
  }
  return A;
}

// ---------------------------------------------------------------------------

KernelSum kernel_single(const Medium& md) { return KernelSum({{KernelKind::S, md.w1, -2.0 * md.m1}}); }

std::array<KernelSum, 4> kernel_two_mass(const Medium& md) {
  const double mb = md.mbar, w1 = md.w1, w2 = md.w2;
  std::array<KernelSum, 4> k;
  if (md.equal_masses()) {
    k[0] = KernelSum({{KernelKind::S, w1, -2.0 * mb}});
    k[1] = KernelSum({{KernelKind::D, w1, -2.0 * mb}});
    return k;
  }
  k[0] = KernelSum({{KernelKind::Sp, w2, -1.0}, {KernelKind::Sp, w1, 1.0}, {KernelKind::S, w2, -mb},
                    {KernelKind::S, w1, -mb}});
  k[1] = KernelSum({{KernelKind::D, w2, -mb}, {KernelKind::D, w1, -mb}, {KernelKind::DpReg, w2, -1.0},
                    {KernelKind::DpReg, w1, 1.0}});
  k[2] = KernelSum({{KernelKind::S, w2, 1.0}, {KernelKind::S, w1, -1.0}});
  k[3] = KernelSum({{KernelKind::D, w2, 1.0}, {KernelKind::D, w1, -1.0}});
  return k;
}

SingleMassSystem::SingleMassSystem(const Boundary& bd, const Medium& md, const OpOptions& opt)
    : bd_(&bd), md_(md), L_(bd, kernel_single(md), opt), Q_(bd, md.E, md.m1 * md.m1 / md.E) {
  if (!md.equal_masses()) fail(ErrorCode::InvalidArgument, "SingleMassSystem: masses differ");
}

void SingleMassSystem::apply_P(const cplx* rho, cplx* mu) const {
  Q_.apply(rho, mu);
  for (int i = 0; i < bd_->n_core(); ++i) mu[bd_->core_begin + i] += rho[i];
}

void SingleMassSystem::apply_L(const cplx* mu, cplx* y) const {
  for (int i = 0; i < bd_->n_core(); ++i) y[i] = mu[bd_->core_begin + i];
  L_.apply_add(mu, y);
}

void SingleMassSystem::apply(const cplx* rho, cplx* y) const {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<cplx> mu(bd_->n_over());
  apply_P(rho, mu.data());
  apply_L(mu.data(), y);
  ++matvecs;
  matvec_seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Eigen::MatrixXcd SingleMassSystem::dense_L() const {
  Eigen::MatrixXcd A = L_.dense().cast<cplx>();
  for (int i = 0; i < bd_->n_core(); ++i) A(i, bd_->core_begin + i) += 1.0;
  return A;
}

Eigen::MatrixXcd SingleMassSystem::dense_P() const {
  Eigen::MatrixXcd A = Q_.dense();
  for (int i = 0; i < bd_->n_core(); ++i) A(bd_->core_begin + i, i) += 1.0;
  return A;
}

TwoMassSystem::TwoMassSystem(const Boundary& bd, const Medium& md, const OpOptions& opt)
    : bd_(&bd), md_(md), c_(0.5 / md.m2 - 0.5 / md.m1), Q2_(bd, md.E, md.mbar * md.mbar / md.E) {
  const std::array<KernelSum, 4> k = kernel_two_mass(md);
  K11_ = std::make_unique<LayerOperator>(bd, k[0], opt);
  K12_ = std::make_unique<LayerOperator>(bd, k[1], opt);
  if (!k[2].empty()) K21_ = std::make_unique<LayerOperator>(bd, k[2], opt);
  if (!k[3].empty()) K22_ = std::make_unique<LayerOperator>(bd, k[3], opt);
}

std::array<double, 4> TwoMassSystem::Vinv() const {
  const double det = -1.0 - c_ * c_;
  if (!(det < 0.0)) fail(ErrorCode::Internal, "P2: singular V");
  return {1.0 / det, -c_ / det, -c_ / det, -1.0 / det};
}

void TwoMassSystem::apply_P2(const cplx* sigma, cplx* mu_rho) const {
  const int nc = bd_->n_core(), n = bd_->n_over(), cb = bd_->core_begin;
  const std::array<double, 4> vi = Vinv();
  std::vector<cplx> tau(nc), q(n);
  for (int i = 0; i < nc; ++i) tau[i] = vi[0] * sigma[i] + vi[1] * sigma[nc + i];
  Q2_.apply(tau.data(), q.data());
  for (int j = 0; j < n; ++j) {
    mu_rho[j] = -q[j];
    mu_rho[n + j] = c_ * q[j];
  }
  for (int i = 0; i < nc; ++i) {
    mu_rho[cb + i] += sigma[i];
    mu_rho[n + cb + i] += sigma[nc + i];
  }
}

void TwoMassSystem::apply_L2(const cplx* mu_rho, cplx* y) const {
  const int nc = bd_->n_core(), n = bd_->n_over(), cb = bd_->core_begin;
  const cplx* mu = mu_rho;
  const cplx* rho = mu_rho + n;
  for (int i = 0; i < nc; ++i) {
    y[i] = mu[cb + i];
    y[nc + i] = rho[cb + i];
  }
  K11_->apply_add(mu, y);
  K12_->apply_add(rho, y);
  if (K21_) K21_->apply_add(mu, y + nc);
  if (K22_) K22_->apply_add(rho, y + nc);
}

void TwoMassSystem::apply(const cplx* sigma, cplx* y) const {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<cplx> mr(2 * bd_->n_over());
  apply_P2(sigma, mr.data());
  apply_L2(mr.data(), y);
  ++matvecs;
  matvec_seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Eigen::MatrixXcd TwoMassSystem::dense_L2() const {
  const int nc = bd_->n_core(), n = bd_->n_over(), cb = bd_->core_begin;
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(2 * nc, 2 * n);
  A.block(0, 0, nc, n) = K11_->dense().cast<cplx>();
  A.block(0, n, nc, n) = K12_->dense().cast<cplx>();
  if (K21_) A.block(nc, 0, nc, n) = K21_->dense().cast<cplx>();
  if (K22_) A.block(nc, n, nc, n) = K22_->dense().cast<cplx>();
  for (int i = 0; i < nc; ++i) {
    A(i, cb + i) += 1.0;
    A(nc + i, n + cb + i) += 1.0;
  }
  return A;
}

Eigen::MatrixXcd TwoMassSystem::dense_P2() const {
  const int nc = bd_->n_core(), n = bd_->n_over(), cb = bd_->core_begin;
  const std::array<double, 4> vi = Vinv();
  const Eigen::MatrixXcd Q = Q2_.dense();
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(2 * n, 2 * nc);
  A.block(0, 0, n, nc) = -vi[0] * Q;
  A.block(0, nc, n, nc) = -vi[1] * Q;
  A.block(n, 0, n, nc) = c_ * vi[0] * Q;
  A.block(n, nc, n, nc) = c_ * vi[1] * Q;
  for (int i = 0; i < nc; ++i) {
    A(cb + i, i) += 1.0;
    A(n + cb + i, nc + i) += 1.0;
  }
  return A;
}

void write_matrix_binary(const std::string& path, const Eigen::MatrixXcd& A) {
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrorCode::Io, "cannot open " + path + " for writing");
  const std::uint64_t rows = A.rows(), cols = A.cols();
  f.write(reinterpret_cast<const char*>(&rows), sizeof rows);
  f.write(reinterpret_cast<const char*>(&cols), sizeof cols);
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j) {
      const cplx v = A(i, j);
      f.write(reinterpret_cast<const char*>(&v), sizeof v);
    }
  if (!f) fail(ErrorCode::Io, "write failed: " + path);
}

}  // namespace kgw
