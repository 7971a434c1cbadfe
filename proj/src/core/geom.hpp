// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "core/common.hpp"

namespace kgw {

enum class CurveFamily { Flat, GaussSine, VShape, Custom };

CurveFamily curve_family_from_string(const std::string& name);
std::string to_string(CurveFamily f);

struct CurvePoint {
  Vec2 pos;
  Vec2 d1;  // gamma'
  Vec2 d2;  // gamma''
  double speed = 1.0;
  Vec2 normal;  // gamma'/s rotated by +90 degrees
};

// Parameterized open curve, asymptotically straight at both ends.
//   Flat:      gamma(t) = (t, 0)
//   GaussSine: params (A, c, b, phi):  gamma(t) = (t, A exp(-c t^2) sin(b t + phi))
//   VShape:    params (sL, sR, w):     gamma(t) = (t, (sR-sL)/2 w logcosh(t/w) + (sR+sL)/2 t)
//   Custom:    params (t0, t1), Legendre coefficients for x and y on [t0, t1],
//              continued by straight lines outside
class Curve {
 public:
  Curve() = default;
  Curve(CurveFamily family, std::vector<double> params, std::vector<double> cx = {}, std::vector<double> cy = {});

  CurvePoint eval(double t) const;
  CurveFamily family() const { return family_; }
  const std::vector<double>& params() const { return params_; }
  const std::vector<double>& custom_x() const { return cx_; }
  const std::vector<double>& custom_y() const { return cy_; }

  // parameters where the curve is only piecewise smooth
  std::vector<double> breakpoints() const;
  // center of the curved region
  double center() const;
  // limiting unit tangent as t -> -inf (sign < 0) or +inf (sign > 0)
  Vec2 asymptotic_direction(int sign) const;

 private:
  void eval_custom(double t, CurvePoint& p) const;

  CurveFamily family_ = CurveFamily::Flat;
  std::vector<double> params_;
  std::vector<double> cx_, cy_;
};

Curve build_curve(CurveFamily family, const std::vector<double>& params, const std::vector<double>& cx = {},
                  const std::vector<double>& cy = {});

struct Panel {
  double a = 0.0;
  double b = 0.0;
  int first = 0;  // first node index
  bool buffer = false;
  double sigma0 = 0.0;             // arclength coordinate at a
  std::vector<double> speed_coef;  // Legendre coefficients of s on the panel
  double length() const { return b - a; }
};

inline constexpr int kNodesPerPanel = 16;

struct Boundary {
  Curve curve;
  std::vector<Panel> panels;
  double a = 0.0, b = 0.0;    // core window
  double ap = 0.0, bp = 0.0;  // buffered window
  int core_begin = 0, core_end = 0;          // node range [begin, end)
  int core_panel_begin = 0, core_panel_end = 0;

  std::vector<double> t;
  std::vector<Vec2> pos;
  std::vector<Vec2> normal;
  std::vector<double> speed;
  std::vector<double> weight;   // w_GL * s * h/2
  std::vector<double> sigma;    // arclength coordinate
  std::vector<double> curv;     // n . gamma''
  std::vector<int> panel_of;

  int n_over() const { return static_cast<int>(t.size()); }
  int n_core() const { return core_end - core_begin; }
  int n_panels() const { return static_cast<int>(panels.size()); }
  int n_core_panels() const { return core_panel_end - core_panel_begin; }
  bool is_core(int j) const { return j >= core_begin && j < core_end; }

  // arclength coordinate at parameter t inside panel p
  double sigma_at(int p, double t) const;
  // speed interpolated from the panel's Legendre fit
  double panel_speed(int p, double t) const;
  // panel containing parameter t (clamped to the ends)
  int locate(double t) const;
};

struct ChunkOptions {
  double eps = 1e-12;
  double max_len = 0.0;  // <= 0: no length cap
  int max_depth = 30;
};

// Resolution tail of x, y, s on [a, b] (32-node Legendre coefficients 16..31).
double resolution_tail(const Curve& c, double a, double b);

std::vector<double> adaptive_chunk(const Curve& c, double a, double b, const ChunkOptions& opt);
std::vector<double> uniform_chunk(double a, double b, int nc);
std::vector<double> balance_chunks(std::vector<double> breaks);

struct BufferSpec {
  double tau = 1.0;
  double omega0 = 1.0;
  double log_inv_eps = 36.841361487904734;  // log(1e16)
  int nc = 0;                               // core panel count used for the buffer panel density
  double max_len = 0.0;
};

// Buffer panel count per side.
int buffer_panels_per_side(const BufferSpec& spec, double core_param_len);

// Builds the balanced buffered boundary from core breakpoints.
Boundary extend_with_buffers(const Curve& c, const std::vector<double>& core_breaks, const BufferSpec& spec);

// Node arrays and arclength from a finished breakpoint list.
Boundary assemble_boundary(const Curve& c, const std::vector<double>& breaks, double a, double b);

struct WindowHint {
  double a = 0.0;
  double b = 0.0;
};

// Smallest window where the curve is straight to eps and the incident trace falls below eps.
WindowHint suggest_window(const Curve& c, const std::vector<Vec2>& sources, double omega, double eps);

}  // namespace kgw
