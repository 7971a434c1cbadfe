// SPDX-License-Identifier: Apache-2.0
#include "core/h2matrix.hpp"

#include <algorithm>
#include <cmath>

#include "core/parallel.hpp"

namespace kgw {

namespace {

using Mat2c = Eigen::Matrix<double, Eigen::Dynamic, 2>;
using RowMat2 = Eigen::Matrix<double, Eigen::Dynamic, 2, Eigen::RowMajor>;

}  // namespace

int H2Matrix::build_tree(Tree& tree, const H2Points& p, const std::vector<double>& breaks, int begin, int end,
                         int leaf, int parent) {
  Cluster c{begin, end, p.t[begin], p.t[end - 1], 1e300, -1e300, 1e300, -1e300, 1 << 30, -(1 << 30)};
  c.parent = parent;
  for (int i = begin; i < end; ++i) {
    c.xmin = std::min(c.xmin, p.pos[i].x);
    c.xmax = std::max(c.xmax, p.pos[i].x);
    c.ymin = std::min(c.ymin, p.pos[i].y);
    c.ymax = std::max(c.ymax, p.pos[i].y);
    c.pmin = std::min(c.pmin, p.panel[i]);
    c.pmax = std::max(c.pmax, p.panel[i]);
  }
  for (double b : breaks) c.smooth = c.smooth && !(b > c.t0 && b < c.t1);
  const int id = static_cast<int>(tree.size());
  tree.push_back(c);
  if (end - begin > leaf) {
    const int mid = begin + (end - begin) / 2;
    const int l = build_tree(tree, p, breaks, begin, mid, leaf, id);
    const int r = build_tree(tree, p, breaks, mid, end, leaf, id);
    tree[id].left = l;
    tree[id].right = r;
  }
  return id;
}

void H2Matrix::partition(int ti, int si) {
  const Cluster& t = ttree_[ti];
  const Cluster& s = stree_[si];
  const double dx = std::max(0.0, std::max(t.xmin - s.xmax, s.xmin - t.xmax));
  const double dy = std::max(0.0, std::max(t.ymin - s.ymax, s.ymin - t.ymax));
  const double dist = std::hypot(dx, dy);
  if (dist > opt_.cutoff) {
    ++stats_.n_dropped_blocks;
    return;
  }
  const int gap = std::max(s.pmin - t.pmax, t.pmin - s.pmax);
  const bool tleaf = t.left < 0, sleaf = s.left < 0;
  const bool admissible = gap > opt_.panel_gap && std::max(t.diam(), s.diam()) <= opt_.eta * dist && t.smooth &&
                          s.smooth && t.resolved && s.resolved && std::min(t.size(), s.size()) >= p_;
  if (admissible) {
    adm_.emplace_back(ti, si);
    return;
  }
  if (tleaf && sleaf) {
    near_.emplace_back(ti, si);
    return;
  }
  if (tleaf) {
    partition(ti, s.left);
    partition(ti, s.right);
  } else if (sleaf) {
    partition(t.left, si);
    partition(t.right, si);
  } else {
    const int tl = t.left, tr = t.right, sl = s.left, sr = s.right;
    partition(tl, sl);
    partition(tl, sr);
    partition(tr, sl);
    partition(tr, sr);
  }
}

void H2Matrix::mark_resolved(Tree& tree, const Geometry& geom) const {
  std::vector<double> probe(p_ - 1);
  for (int k = 1; k < p_; ++k) probe[k - 1] = std::cos(kPi * k / p_);
  parallel_for(static_cast<int>(tree.size()), [&](int c) {
    Cluster& cl = tree[c];
    if (!cl.smooth || cl.size() < p_) {
      cl.resolved = false;
      return;
    }
    const double mid = 0.5 * (cl.t0 + cl.t1), half = 0.5 * (cl.t1 - cl.t0);
    std::vector<double> x(p_), xp(p_ - 1);
    for (int k = 0; k < p_; ++k) x[k] = mid + half * ref_nodes_[k];
    for (int k = 0; k < p_ - 1; ++k) xp[k] = mid + half * probe[k];
    Eigen::MatrixXd G(p_, 4);
    for (int k = 0; k < p_; ++k) {
      const GeoPoint g = geom(x[k]);
      G.row(k) << g.pos.x, g.pos.y, g.normal.x, g.normal.y;
    }
    const Eigen::MatrixXd I = interp_matrix(cl, xp.data(), p_ - 1) * G;
    const double scale = std::max(1.0, cl.diam());
    double err = 0.0;
    for (int k = 0; k < p_ - 1; ++k) {
      const GeoPoint g = geom(xp[k]);
      err = std::max(err, std::hypot(I(k, 0) - g.pos.x, I(k, 1) - g.pos.y) / scale);
      err = std::max(err, std::hypot(I(k, 2) - g.normal.x, I(k, 3) - g.normal.y));
    }
    cl.resolved = err <= opt_.geo_tol;
  });
}

Eigen::MatrixXd H2Matrix::interp_matrix(const Cluster& c, const double* x, int nx) const {
  Eigen::MatrixXd B(nx, p_);
  const double mid = 0.5 * (c.t0 + c.t1), half = 0.5 * (c.t1 - c.t0);
  for (int i = 0; i < nx; ++i) {
    const double u = half > 0.0 ? (x[i] - mid) / half : 0.0;
    int hit = -1;
    double den = 0.0;
    for (int k = 0; k < p_; ++k) {
      const double d = u - ref_nodes_[k];
      if (d == 0.0) {
        hit = k;
        break;
      }
      den += bary_[k] / d;
    }
    for (int k = 0; k < p_; ++k) {
      if (hit >= 0) B(i, k) = k == hit ? 1.0 : 0.0;
      else B(i, k) = bary_[k] / (u - ref_nodes_[k]) / den;
    }
  }
  return B;
}

H2Matrix::H2Matrix(const H2Points& tgt, const H2Points& src, const Entry& entry, const Geometry& geom,
                   const Kernel& kernel, const H2Options& opt)
    : m_(static_cast<int>(tgt.t.size())), n_(static_cast<int>(src.t.size())), p_(opt.order), opt_(opt) {
  if (m_ == 0 || n_ == 0) return;
  if (p_ < 2) fail(ErrorCode::InvalidArgument, "H2Matrix: order must be >= 2");
  ref_nodes_.resize(p_);
  bary_.resize(p_);
  for (int k = 0; k < p_; ++k) {
    const double th = kPi * (2.0 * k + 1.0) / (2.0 * p_);
    ref_nodes_[k] = std::cos(th);
    bary_[k] = ((k % 2) ? -1.0 : 1.0) * std::sin(th);
  }
  build_tree(ttree_, tgt, opt_.breaks, 0, m_, opt_.leaf_size, -1);
  build_tree(stree_, src, opt_.breaks, 0, n_, opt_.leaf_size, -1);
  mark_resolved(ttree_, geom);
  mark_resolved(stree_, geom);
  partition(0, 0);

  auto nodes_of = [&](const Cluster& c) {
    std::vector<double> x(p_);
    const double mid = 0.5 * (c.t0 + c.t1), half = 0.5 * (c.t1 - c.t0);
    for (int k = 0; k < p_; ++k) x[k] = mid + half * ref_nodes_[k];
    return x;
  };
  auto bases = [&](const Tree& tree, const H2Points& pts, bool weighted, std::vector<Eigen::MatrixXd>& basis,
                   std::vector<Eigen::MatrixXd>& transfer) {
    const int nc = static_cast<int>(tree.size());
    basis.assign(nc, Eigen::MatrixXd());
    transfer.assign(nc, Eigen::MatrixXd());
    parallel_for(nc, [&](int c) {
      const Cluster& cl = tree[c];
      if (cl.left < 0) {
        basis[c] = interp_matrix(cl, pts.t.data() + cl.begin, cl.size());
        if (weighted)
          for (int i = 0; i < cl.size(); ++i) basis[c].row(i) *= pts.weight[cl.begin + i];
      }
      if (cl.parent >= 0) {
        const std::vector<double> x = nodes_of(cl);
        transfer[c] = interp_matrix(tree[cl.parent], x.data(), p_);
      }
    });
  };
  bases(ttree_, tgt, false, tbasis_, ttransfer_);
  bases(stree_, src, true, sbasis_, stransfer_);
  for (const auto& b : tbasis_) stats_.basis_entries += b.size();
  for (const auto& b : sbasis_) stats_.basis_entries += b.size();

  // geometry at the Chebyshev nodes of clusters that take part in a coupling
  std::vector<std::vector<GeoPoint>> tgeo(ttree_.size()), sgeo(stree_.size());
  std::vector<char> tneed(ttree_.size(), 0), sneed(stree_.size(), 0);
  for (const auto& pr : adm_) {
    tneed[pr.first] = 1;
    sneed[pr.second] = 1;
  }
  auto fill_geo = [&](const Tree& tree, const std::vector<char>& need, std::vector<std::vector<GeoPoint>>& g) {
    parallel_for(static_cast<int>(tree.size()), [&](int c) {
      if (!need[c]) return;
      const std::vector<double> x = nodes_of(tree[c]);
      g[c].resize(p_);
      for (int k = 0; k < p_; ++k) g[c][k] = geom(x[k]);
    });
  };
  fill_geo(ttree_, tneed, tgeo);
  fill_geo(stree_, sneed, sgeo);

  coupling_.assign(ttree_.size(), {});
  for (const auto& pr : adm_) coupling_[pr.first].push_back(Coupling{pr.first, pr.second, Eigen::MatrixXd()});
  dense_.assign(ttree_.size(), {});
  for (const auto& pr : near_) dense_[pr.first].push_back(Dense{pr.first, pr.second, Eigen::MatrixXd()});
  parallel_for(static_cast<int>(ttree_.size()), [&](int c) {
    for (Coupling& cp : coupling_[c]) {
      cp.K.resize(p_, p_);
      for (int b = 0; b < p_; ++b)
        for (int a = 0; a < p_; ++a) cp.K(a, b) = kernel(tgeo[cp.t][a], sgeo[cp.s][b]);
    }
    for (Dense& d : dense_[c]) {
      const Cluster& t = ttree_[d.t];
      const Cluster& s = stree_[d.s];
      d.D.resize(t.size(), s.size());
      for (int l = 0; l < s.size(); ++l)
        for (int i = 0; i < t.size(); ++i) d.D(i, l) = entry(t.begin + i, s.begin + l);
    }
  });
  stats_.n_coupling_blocks = static_cast<int>(adm_.size());
  stats_.n_dense_blocks = static_cast<int>(near_.size());
  stats_.coupling_entries = static_cast<long long>(adm_.size()) * p_ * p_;
  for (const auto& v : dense_)
    for (const Dense& d : v) stats_.dense_entries += d.D.size();
}

void H2Matrix::matvec_add(const cplx* x, cplx* y) const {
  if (m_ == 0 || n_ == 0) return;
  Eigen::Map<const RowMat2> X(reinterpret_cast<const double*>(x), n_, 2);
  Eigen::Map<RowMat2> Y(reinterpret_cast<double*>(y), m_, 2);
  const int ns = static_cast<int>(stree_.size()), nt = static_cast<int>(ttree_.size());
  std::vector<Mat2c> up(ns, Mat2c::Zero(p_, 2)), down(nt, Mat2c::Zero(p_, 2));
  parallel_for(ns, [&](int c) {
    const Cluster& cl = stree_[c];
    if (cl.left < 0) up[c].noalias() = sbasis_[c].transpose() * X.middleRows(cl.begin, cl.size());
  });
  for (int c = ns - 1; c > 0; --c) up[stree_[c].parent].noalias() += stransfer_[c].transpose() * up[c];
  parallel_for(nt, [&](int c) {
    for (const Coupling& cp : coupling_[c]) down[c].noalias() += cp.K * up[cp.s];
  });
  for (int c = 1; c < nt; ++c) down[c].noalias() += ttransfer_[c] * down[ttree_[c].parent];
  parallel_for(nt, [&](int c) {
    const Cluster& cl = ttree_[c];
    if (cl.left >= 0) return;
    auto Yc = Y.middleRows(cl.begin, cl.size());
    Yc.noalias() += tbasis_[c] * down[c];
    for (const Dense& d : dense_[c]) {
      const Cluster& s = stree_[d.s];
      Yc.noalias() += d.D * X.middleRows(s.begin, s.size());
    }
  });
}

}  // namespace kgw
