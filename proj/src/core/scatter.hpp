// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "core/solver.hpp"

namespace kgw {

struct ScatterResult {
  double b = 0.0;
  cplx A, B, C;
  double R_L = 0.0, T_L = 0.0, T_L_prime = 0.0;
  int iterations = 0;
  double wall_s = 0.0;
  bool ok = true;
  std::string error;
};

// Right- and left-going surface wave amplitudes (m^2/2E) rho^(+-E).
struct SurfaceAmplitudes {
  cplx right, left;
};
SurfaceAmplitudes surface_amplitudes(const Solution& sol);

ScatterResult reflection_transmission(const Solution& run, const Solution& baseline);

// Default scattering setup: GaussSine(2, 0.05, b, 0.4), (m, E) = (4, 1), source (-40, 1).
ProblemConfig default_scatter_config();
std::vector<double> default_b_grid();  // 61 points on [0, 3]

// One solve per b against a shared b = 0 baseline and a shared window.
// Per-point failures are recorded in the result and the sweep continues.
std::vector<ScatterResult> sweep_b(const ProblemConfig& tmpl, const std::vector<double>& bs,
                                   const std::function<void(const ScatterResult&)>& progress = {});

}  // namespace kgw
