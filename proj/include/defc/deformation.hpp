#pragma once

#include <string>
#include <vector>

#include "defc/series.hpp"

namespace defc {

// U(phi): the closed region between the inner and outer envelopes of
// S^1 and phi(S^1), seen from 0 and from infinity.
struct AnnularRegion {
  std::vector<cplx> outer;  // counterclockwise boundary polylines
  std::vector<cplx> inner;
  std::vector<double> r_in, r_out;  // radial case: envelopes at angles 2 pi j / K
  bool radial = true;
  bool trivial = true;  // U = S^1
  double r_min = 1.0, r_max = 1.0;
  std::vector<cplx> curve;  // phi(S^1) itself, for the non-radial test

  bool contains(cplx p, double tol = 1e-9) const;
  // Points strictly inside, on a polar grid; thin places are skipped.
  std::vector<cplx> probes(int angles, int layers, double min_width = 1e-4) const;
};

class Deformation {
 public:
  Deformation();  // identity

  const AnalyticLoop& loop() const { return loop_; }
  const AnnularRegion& region() const { return region_; }
  cplx operator()(cplx z) const { return loop_(z); }
  int modes() const { return loop_.modes(); }

  friend Deformation make_deformation(const AnalyticLoop& loop);

 private:
  AnalyticLoop loop_;
  AnnularRegion region_;
};

// Validates zero-freeness, injectivity on S^1 and winding +1 (in that order),
// then builds U(phi).
Deformation make_deformation(const AnalyticLoop& loop);

Deformation identity_deformation(int modes = 0);
Deformation rotation(double alpha, int modes = 0);
Deformation scaling(double tau, int modes = 0);

bool is_composable(const Deformation& phi, const Deformation& psi, std::string* why = nullptr);
Deformation compose(const Deformation& phi, const Deformation& psi);

bool is_invertible(const Deformation& phi);
Deformation invert(const Deformation& phi);

// Solves phi(w) = target by damped Newton from `seed`; returns false on failure.
bool newton_preimage(const AnalyticLoop& phi, const AnalyticLoop& dphi, cplx target, cplx& w,
                     double tol = 1e-12, int max_iter = 50);

// Minimum of |f(z_j) - f(z_k)| / |z_j - z_k| over distinct grid points, divided
// by the mean modulus of f.
double self_proximity(const std::vector<cplx>& values);
bool polyline_is_simple(const std::vector<cplx>& pts);

}  // namespace defc
