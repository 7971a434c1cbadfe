// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <vector>

#include "core/common.hpp"

namespace kgw {

struct H2Options {
  double eta = 0.5;         // admissibility: max(diam) <= eta * dist
  int leaf_size = 32;
  int order = 16;           // Chebyshev points per cluster
  double cutoff = 1e300;    // cluster pairs farther apart than this are dropped
  int panel_gap = 1;        // index pairs with |panel_t - panel_s| <= gap are excluded
  std::vector<double> breaks;  // parameters where the kernel is not analytic
  double geo_tol = 1e-13;      // clusters whose geometry the interpolant misses by more are never admissible
};

struct H2Stats {
  long long dense_entries = 0;
  long long basis_entries = 0;
  long long coupling_entries = 0;
  int n_dense_blocks = 0;
  int n_coupling_blocks = 0;
  int n_dropped_blocks = 0;
};

// Point set ordered along a parametrized curve.
struct H2Points {
  std::vector<double> t;
  std::vector<Vec2> pos;
  std::vector<int> panel;
  std::vector<double> weight;  // source quadrature weights (ignored for targets)
};

// Real nested-basis hierarchical matrix, A(i, l) = k(t_i, s_l) w_l for separated pairs,
// using Chebyshev interpolation in the curve parameter, applied to complex vectors.
class H2Matrix {
 public:
  using Entry = std::function<double(int, int)>;  // exact (target, source) entry, weight included
  struct GeoPoint {
    Vec2 pos, normal;
  };
  using Geometry = std::function<GeoPoint(double)>;
  using Kernel = std::function<double(const GeoPoint&, const GeoPoint&)>;  // no weight

  H2Matrix() = default;
  H2Matrix(const H2Points& tgt, const H2Points& src, const Entry& entry, const Geometry& geom, const Kernel& kernel,
           const H2Options& opt);

  // y += A x
  void matvec_add(const cplx* x, cplx* y) const;
  int rows() const { return m_; }
  int cols() const { return n_; }
  const H2Stats& stats() const { return stats_; }

 private:
  struct Cluster {
    int begin, end;
    double t0, t1;
    double xmin, xmax, ymin, ymax;
    int pmin, pmax;
    int parent = -1, left = -1, right = -1;
    bool smooth = true;  // no break strictly inside [t0, t1]
    bool resolved = true;
    int size() const { return end - begin; }
    double diam() const { return std::hypot(xmax - xmin, ymax - ymin); }
  };
  using Tree = std::vector<Cluster>;

  static int build_tree(Tree& tree, const H2Points& p, const std::vector<double>& breaks, int begin, int end,
                        int leaf, int parent);
  void mark_resolved(Tree& tree, const Geometry& geom) const;
  void partition(int t, int s);
  Eigen::MatrixXd interp_matrix(const Cluster& c, const double* x, int nx) const;  // nx x p

  int m_ = 0, n_ = 0, p_ = 0;
  H2Options opt_;
  Tree ttree_, stree_;
  // per cluster: leaves hold the basis (size x p); others the transfer to the parent (p x p)
  std::vector<Eigen::MatrixXd> tbasis_, sbasis_, ttransfer_, stransfer_;
  struct Coupling {
    int t, s;
    Eigen::MatrixXd K;  // p x p
  };
  struct Dense {
    int t, s;
    Eigen::MatrixXd D;
  };
  std::vector<std::vector<Coupling>> coupling_;  // grouped by target cluster
  std::vector<std::vector<Dense>> dense_;        // grouped by target leaf
  std::vector<std::pair<int, int>> adm_, near_;
  std::vector<double> ref_nodes_, bary_;
  H2Stats stats_;
};

}  // namespace kgw
