// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <functional>
#include <vector>

#include "core/common.hpp"
#include "core/ops.hpp"

namespace kgw::flat {

using Mat2 = std::array<cplx, 4>;  // row-major

// Symbol of L P for a single mass, and its inverse.
cplx symbol_a(double xi, double m, double E);
cplx symbol_a_inv(double xi, double m, double E);

// Symbols of L = I - 2 m S and P = I + Q separately (P is singular at xi = +-E).
double symbol_L(double xi, double m, double E);
cplx symbol_P(double xi, double m, double E);

// Scalar multiplier of the reduced flat two-mass equation; vanishes at xi = +-E.
double symbol_R(double xi, double m1, double m2, double E);

// Flat symbol of L2 acting on (mu, rho).
Mat2 symbol_L2(double xi, const Medium& md);
// Symbol of P2 acting on (sigma1, sigma2), singular at xi = +-E.
Mat2 symbol_P2(double xi, const Medium& md);
// Flat symbol of L2 P2 acting on (sigma1, sigma2); finite at xi = +-E.
Mat2 symbol_system2(double xi, const Medium& md);
// Null vector of symbol_L2 at xi = +-E.
std::array<double, 2> null_vector(const Medium& md);

// Applies a Fourier multiplier to uniform samples with spacing h.
CVec apply_multiplier(const CVec& f, double h, const std::function<cplx(double)>& sym);
// Two-component multiplier: (g1, g2) = M(xi) (f1, f2), or M(xi)^{-1} when invert is set.
void apply_multiplier2(const CVec& f1, const CVec& f2, double h, const std::function<Mat2(double)>& M, bool invert,
                       CVec& g1, CVec& g2);

// rho = F^{-1}[a^{-1} F[2 m trace]]; throws Domain if the trace has not decayed at the grid ends.
CVec flat_solve_fft(const CVec& trace, double h, double m, double E);
// sigma = F^{-1}[M^{-1} F[r]] for the two-mass flat system.
void flat_solve_fft2(const CVec& r1, const CVec& r2, double h, const Medium& md, CVec& sigma1, CVec& sigma2);

// Band-limited interpolation of samples f(t0 + k h) at arbitrary t.
std::vector<cplx> resample(const CVec& f, double t0, double h, const std::vector<double>& t);

// Outgoing single-mass field of a unit point source over the flat interface y = 0.
cplx sommerfeld_field(Vec2 x, Vec2 src, double m, double E);

}  // namespace kgw::flat
