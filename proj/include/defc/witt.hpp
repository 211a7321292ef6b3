#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "defc/deformation.hpp"

namespace defc {

// v(z) d/dz, stored as the Laurent series of v(z).
class VectorField {
 public:
  VectorField();
  explicit VectorField(AnalyticLoop coeffs) : loop_(std::move(coeffs)) {}
  static VectorField from_coeffs(const std::map<int, cplx>& c, int modes = 0) {
    return VectorField(AnalyticLoop::from_coeffs(c, modes));
  }

  const AnalyticLoop& loop() const { return loop_; }
  cplx operator()(cplx z) const { return loop_(z); }
  cplx coeff(int n) const { return loop_.coeff(n); }
  int modes() const { return loop_.modes(); }

  // theta coordinates: v~(theta) = -i e^{-i theta} v(e^{i theta}).
  cplx theta_value(double theta) const;
  AnalyticLoop theta_loop() const;  // v~ as a Laurent series in e^{i theta}

  VectorField operator+(const VectorField& o) const { return VectorField(loop_ + o.loop_); }
  VectorField operator-(const VectorField& o) const { return VectorField(loop_ - o.loop_); }
  VectorField operator*(cplx s) const { return VectorField(loop_ * s); }

 private:
  AnalyticLoop loop_;
};

VectorField generator(int n, int modes = 0);    // l_n = -z^{n+1} d/dz
VectorField generator_i(int n, int modes = 0);  // i l_n
VectorField tangential(int n, int modes = 0);   // (l_n - l_{-n}) / 2

// [v, w] = (v w' - w v') d/dz; exact coefficient convolution.
VectorField bracket(const VectorField& v, const VectorField& w);

// F^* v = v(F(z)) / F'(z).
VectorField pullback(const AnalyticLoop& f, const VectorField& v);

// Closed-form flow of c * l_n at time t, i.e. the flow of l_n at complex time c t.
Deformation exact_flow(int n, cplx t, int modes = 0);

// Piecewise cubic Hermite (Catmull-Rom) interpolation of fields in time.
struct TimeField {
  std::vector<double> knots;
  std::vector<VectorField> fields;

  static TimeField constant(const VectorField& v);
  cplx eval(double t, cplx z) const;
  VectorField at(double t) const;
  bool certified_at(double rho) const;

 private:
  void weights(double t, int idx[4], double w[4]) const;
};

struct FlowResult {
  Deformation phi;
  double error_estimate = 0;
};

// Left-trivialized flow  d/dt Phi = v(t, Phi), RK4 per grid point.
FlowResult flow_ode(const TimeField& v, double t_end, int steps, double tol = 1e-8);
// Right-trivialized flow  d/dt Phi = Phi' w(t), method of lines with spectral derivative.
FlowResult flow_right(const TimeField& w, double t_end, int steps, double tol = 1e-8);

// Flow of a time-independent field; closed form for multiples of a single generator.
Deformation field_flow(const VectorField& v, double t, int steps = 400);

using Curve = std::function<Deformation(double)>;
// (v, w) with v = dgamma/dt o gamma^{-1} and w = (dgamma/dt) / gamma'.
std::pair<VectorField, VectorField> curve_to_field(const Curve& gamma, double t, double h);

}  // namespace defc
