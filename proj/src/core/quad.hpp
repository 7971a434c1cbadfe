// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <functional>

#include "core/common.hpp"

namespace kgw {

using Weights16 = std::array<double, 16>;
using CWeights16 = std::array<cplx, 16>;

// M_k(x0) = int_{-1}^{1} log|x0 - x| P_k(x) dx, k = 0..15.
std::array<double, 16> log_moments(double x0);

// Weights on the 16 Gauss-Legendre nodes of [a, b] with
//   sum_l w_l p(t_l) = int_a^b p(s) log|t - s| ds   for deg p <= 15.
Weights16 log_corrected_weights(double a, double b, double t);

// Weights with sum_l w_l p(t_l) = int_a^b K(s) p(s) ds for deg p <= 15, where K
// is smooth on each side of `split` (ignored when outside (a, b)).  Each side is
// integrated with 32-point Gauss-Legendre on pieces of length <= max_piece.
CWeights16 moment_weights(double a, double b, double split, double max_piece, const std::function<cplx(double)>& K);

// Weights for the kernel e^{iE|t - s|}.
CWeights16 kink_exact_moments(double a, double b, double t, double E);

// Adaptive Gauss-Kronrod (7/15) with absolute tolerance.
cplx adaptive_reference(const std::function<cplx(double)>& f, double a, double b, double tol, int max_depth = 50);
double adaptive_reference_real(const std::function<double(double)>& f, double a, double b, double tol,
                               int max_depth = 50);

}  // namespace kgw
