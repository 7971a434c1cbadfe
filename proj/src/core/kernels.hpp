// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "core/common.hpp"

namespace kgw {

// Green's function G = K0(omega |x - y|) / (2 pi).
double green(double omega, Vec2 x, Vec2 y);
Vec2 grad_green(double omega, Vec2 x, Vec2 y);  // gradient in x

enum class KernelKind {
  S,      // G(x, y)
  D,      // n(y) . grad_y G
  Sp,     // n(x) . grad_x G
  DpReg,  // n(x) . grad_x [n(y) . grad_y G] minus the omega-independent 1/r^2 part
};

// Geometry of one target/source pair on the curve.
struct PairGeom {
  Vec2 d;       // x - y
  double r;     // |x - y|
  Vec2 nt;      // normal at target
  Vec2 ns;      // normal at source
};

// Diagonal data at a node.
struct NodeGeom {
  double speed;
  double curv;  // n . gamma''
};

struct KernelTerm {
  KernelKind kind;
  double omega;
  double coef;
};

// Linear combination of kernels.  Every term is split as A log|t - t'| + B with A, B smooth.
class KernelSum {
 public:
  KernelSum() = default;
  explicit KernelSum(std::vector<KernelTerm> terms);

  double value(const PairGeom& g) const;
  void split(const PairGeom& g, double log_dt, double& A, double& B) const;
  // limits of A and B as t' -> t
  void diagonal(const NodeGeom& n, double& A, double& B) const;
  bool empty() const { return terms_.empty(); }
  double max_decay_length(double log_inv_eps) const;  // cutoff distance
  const std::vector<KernelTerm>& terms() const { return terms_; }

 private:
  std::vector<KernelTerm> terms_;
};

// Single-kernel evaluations (public for tests).
double kernel_value(KernelKind kind, double omega, const PairGeom& g);
void kernel_split(KernelKind kind, double omega, const PairGeom& g, double log_dt, double& A, double& B);
void kernel_diagonal(KernelKind kind, double omega, const NodeGeom& n, double& A, double& B);

// D'_{w2} - D'_{w1}
inline double kernel_dp_diff(double w2, double w1, const PairGeom& g) {
  return kernel_value(KernelKind::DpReg, w2, g) - kernel_value(KernelKind::DpReg, w1, g);
}

// Off-curve potentials: kernels for target point x with source node y, normal ny.
double pot_S(double omega, Vec2 x, Vec2 y);
Vec2 pot_grad_S(double omega, Vec2 x, Vec2 y);
double pot_D(double omega, Vec2 x, Vec2 y, Vec2 ny);
Vec2 pot_grad_D(double omega, Vec2 x, Vec2 y, Vec2 ny);

}  // namespace kgw
