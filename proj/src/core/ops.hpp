// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <array>
#include <memory>
#include <optional>
#include <vector>

#include "core/geom.hpp"
#include "core/h2matrix.hpp"
#include "core/kernels.hpp"

namespace kgw {

struct Medium {
  double m1 = 1.0, m2 = 1.0, E = 0.5;
  double w1 = 0.0, w2 = 0.0, mbar = 0.0;

  static Medium make(double m1, double m2, double E);
  bool equal_masses() const { return m1 == m2; }
  double omega_min() const { return std::min(w1, w2); }
};

struct OpOptions {
  double eps_trunc = 1e-16;
  bool fast = true;  // hierarchical far field; false = plain dense
  H2Options h;
};

// Far-field plus locally corrected near-field discretization of an integral operator
// with kernel K, mapping buffered densities to core values.
class LayerOperator {
 public:
  LayerOperator(const Boundary& bd, KernelSum k, const OpOptions& opt);

  void apply_add(const cplx* x_buf, cplx* y_core) const;
  Eigen::MatrixXd dense() const;  // n_core x n_over, no truncation
  const H2Stats& hstats() const { return far_.stats(); }
  double cutoff() const { return cutoff_; }

  // near-field weights for core target j: (source index, weight)
  static void near_row(const Boundary& bd, const KernelSum& k, int j, std::vector<int>& idx, std::vector<double>& w);

 private:
  double far_entry(int jcore, int l) const;

  const Boundary* bd_;
  KernelSum k_;
  OpOptions opt_;
  double cutoff_ = 1e300;
  std::vector<int> row_ptr_, col_;
  std::vector<double> val_;
  H2Matrix far_;
  Eigen::MatrixXd plain_;  // used when !fast
};

// (prefactor) * int e^{iE|sigma - sigma'|} rho(t') s(t') dt' from core to buffered nodes,
// by the two-pass sweep plus self-panel kink corrections.
class QOperator {
 public:
  QOperator(const Boundary& bd, double E, double prefactor);
  void apply(const cplx* rho_core, cplx* out_buf) const;
  Eigen::MatrixXcd dense() const;  // n_over x n_core

  // exact self-panel weights for core node j
  static std::array<cplx, 16> kink_weights(const Boundary& bd, int j, double E);

 private:
  const Boundary* bd_;
  double E_, c_;
  std::vector<std::array<cplx, 16>> corr_;  // per core node, minus the smooth rule
};

// Square operator on core densities for GMRES.
class SystemOperator {
 public:
  virtual ~SystemOperator() = default;
  virtual int size() const = 0;
  virtual void apply(const cplx* x, cplx* y) const = 0;
};

class SingleMassSystem : public SystemOperator {
 public:
  SingleMassSystem(const Boundary& bd, const Medium& md, const OpOptions& opt);

  int size() const override { return bd_->n_core(); }
  void apply(const cplx* rho, cplx* y) const override;  // L P rho

  void apply_P(const cplx* rho_core, cplx* mu_buf) const;
  void apply_L(const cplx* mu_buf, cplx* y_core) const;
  void apply_Q(const cplx* rho_core, cplx* out_buf) const { Q_.apply(rho_core, out_buf); }

  Eigen::MatrixXcd dense_L() const;  // n_core x n_over
  Eigen::MatrixXcd dense_P() const;  // n_over x n_core
  const LayerOperator& L() const { return L_; }
  const QOperator& Q() const { return Q_; }

  mutable long long matvecs = 0;
  mutable double matvec_seconds = 0.0;

 private:
  const Boundary* bd_;
  Medium md_;
  LayerOperator L_;
  QOperator Q_;
};

class TwoMassSystem : public SystemOperator {
 public:
  TwoMassSystem(const Boundary& bd, const Medium& md, const OpOptions& opt);

  int size() const override { return 2 * bd_->n_core(); }
  // x = (sigma1, sigma2) stacked; y likewise
  void apply(const cplx* sigma, cplx* y) const override;

  // sigma (2 n_core) -> (mu, rho) (2 n_over)
  void apply_P2(const cplx* sigma, cplx* mu_rho) const;
  // (mu, rho) (2 n_over) -> 2 n_core
  void apply_L2(const cplx* mu_rho, cplx* y) const;

  Eigen::MatrixXcd dense_L2() const;
  Eigen::MatrixXcd dense_P2() const;

  double c() const { return c_; }
  // V = [[-1, c], [c, 1]]
  std::array<double, 4> V() const { return {-1.0, c_, c_, 1.0}; }
  std::array<double, 4> Vinv() const;

  mutable long long matvecs = 0;
  mutable double matvec_seconds = 0.0;

 private:
  const Boundary* bd_;
  Medium md_;
  double c_;
  std::unique_ptr<LayerOperator> K11_, K12_, K21_, K22_;
  QOperator Q2_;
};

// Kernel sums for the block operators.
KernelSum kernel_single(const Medium& md);
std::array<KernelSum, 4> kernel_two_mass(const Medium& md);

// Flat binary dump: uint64 rows, uint64 cols, then row-major complex doubles.
void write_matrix_binary(const std::string& path, const Eigen::MatrixXcd& A);

}  // namespace kgw
