// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "core/geom.hpp"
#include "core/krylov.hpp"
#include "core/ops.hpp"

namespace kgw {

struct PointSource {
  Vec2 pos;
  cplx strength{1.0, 0.0};
  int side = 0;  // 0: from geometry, 1 or 2: asserted side
};

struct CurveSpec {
  std::string family = "flat";
  std::vector<double> params;
  std::vector<double> coeffs_x, coeffs_y;
};

struct ProblemConfig {
  double m1 = 2.0, m2 = 2.0, E = 1.0;
  CurveSpec curve;
  std::optional<std::array<double, 2>> window;  // empty: automatic
  double eps = 1e-12;
  double tau = 1.0;
  int nc = 0;                 // > 0: uniform core panels
  double max_chunk_len = 0.0; // <= 0: 2 / max(omega, |E|)
  std::vector<PointSource> sources;
  double gmres_tol = 1e-12;
  int gmres_max_iter = 500;
  double eps_trunc = 1e-16;
  bool fast = true;

  bool operator==(const ProblemConfig&) const;
};

// Validates field ranges; throws Error(Config) naming the field.
void validate(const ProblemConfig& cfg);

struct Timings {
  double chunking = 0.0;
  double build = 0.0;  // quadrature corrections and far-field compression
  double gmres = 0.0;
  double matvec = 0.0;  // total inside GMRES
  double evaluation = 0.0;
};

struct Solution {
  ProblemConfig config;
  Medium medium;
  std::shared_ptr<const Boundary> boundary;
  bool two_mass = false;
  // single mass: rho (core), mu (buffered); two masses: sigma1, sigma2 (core), mu, rho (buffered)
  CVec rho_core;
  CVec sigma1, sigma2;
  CVec mu, rho;  // buffered
  CVec rhs;
  std::vector<int> source_side;
  GmresReport gmres;
  double true_residual = 0.0;
  Timings timings;
  std::shared_ptr<const SystemOperator> system;
};

Curve make_curve(const CurveSpec& spec);
Medium make_medium(const ProblemConfig& cfg);

// Side (1 below, 2 above) of point x relative to the curve; dist receives the distance to the curve.
int side_of(const Curve& c, Vec2 x, double& dist, double* tstar = nullptr);

Boundary build_boundary(const ProblemConfig& cfg, const Medium& md, double* chunk_seconds = nullptr);

// RHS on core nodes (n_core or 2 n_core entries).
CVec incident_trace(const ProblemConfig& cfg, const Medium& md, const Boundary& bd,
                    const std::vector<int>& sides);
std::vector<int> resolve_sides(const ProblemConfig& cfg, const Curve& c);

Solution solve(const ProblemConfig& cfg);

// Off-curve field evaluation with adaptive near-interface quadrature.
class FieldEvaluator {
 public:
  explicit FieldEvaluator(const Solution& sol);

  cplx value(Vec2 x) const;
  // value and gradient
  void value_grad(Vec2 x, cplx& u, std::array<cplx, 2>& grad) const;
  // evaluation forced on side 1 or 2 (for one-sided limits)
  void value_grad_side(Vec2 x, int side, cplx& u, std::array<cplx, 2>& grad) const;
  int side(Vec2 x, double& dist) const;

 private:
  void layer(Vec2 x, int side, bool want_grad, cplx& u, std::array<cplx, 2>& g) const;
  void incident(Vec2 x, int side, bool want_grad, cplx& u, std::array<cplx, 2>& g) const;

  const Solution* sol_;
  const Boundary* bd_;
  std::vector<std::vector<cplx>> mu_coef_, rho_coef_;  // per panel Legendre coefficients
  std::vector<std::array<double, 4>> bbox_;            // per panel xmin xmax ymin ymax
  std::vector<double> arc_;                            // per panel arclength
  double cutoff_ = 1e300;
};

std::vector<cplx> eval_field(const Solution& sol, const std::vector<Vec2>& targets);

struct JumpDiagnostics {
  double jump_u = 0.0;      // max |[[u]]| / max |u|
  double jump_flux = 0.0;   // max |[[du/dn]] + (m1+m2) u| / scale
  int points = 0;
};

struct StencilDiagnostics {
  Vec2 point;
  double h1 = 0.0, h2 = 0.0;
  double res1 = 0.0, res2 = 0.0;
  double ratio = 0.0;
};

struct Diagnostics {
  JumpDiagnostics jumps;
  StencilDiagnostics stencil;
  double outgoing = 0.0;       // max outer-10% |mu - asymptotic| / max |mu|
  double tail_fraction = 0.0;  // ||rho|| outer 10% / ||rho||
  double mu_consistency = 0.0; // |P rho - mu| / |mu|
};

JumpDiagnostics jump_diagnostics(const Solution& sol, const FieldEvaluator& ev, int npoints = 12);
StencilDiagnostics stencil_diagnostics(const Solution& sol, const FieldEvaluator& ev);
double outgoing_residual(const Solution& sol);
double tail_fraction(const Solution& sol);
Diagnostics diagnostics(const Solution& sol);

// Fourier transform of a core density in the arclength coordinate.
cplx density_fourier(const Boundary& bd, const CVec& core_density, double xi);

}  // namespace kgw
