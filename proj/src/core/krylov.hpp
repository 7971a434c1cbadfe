// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <vector>

#include "core/common.hpp"

namespace kgw {

struct GmresReport {
  int iterations = 0;
  std::vector<double> residuals;  // relative residual after each iteration (entry 0 = initial)
  bool converged = false;
  double seconds = 0.0;
  double orthogonality = 0.0;  // max |Q^H Q - I| over the built basis
};

using LinearMap = std::function<void(const cplx*, cplx*)>;

// Full GMRES (no restarts), modified Gram-Schmidt with conditional reorthogonalization.
CVec gmres(const LinearMap& A, const CVec& rhs, double tol, int max_iter, GmresReport& report,
           bool check_orthogonality = false);

}  // namespace kgw
