#pragma once

#include <vector>

#include "defc/deformation.hpp"

namespace defc {

// Normalized Riemann map q of the disk onto the interior of a loop.
struct DiskMap {
  AnalyticLoop map;        // power series of q
  AnalyticLoop log_ratio;  // g = log(q(w)/w), g(0) real
  AnalyticLoop shift;      // s(theta) with q(e^{i theta}) = boundary(e^{i (theta + s)})
  double deriv_at_zero = 1.0;
  double residual = 0;  // relative size of the negative modes of q
  std::vector<double> history;
};

DiskMap riemann_map(const AnalyticLoop& boundary);

// Lift x -> x + D(e^{ix}) + 2 pi offset of a circle map; D is a Laurent series.
struct Lift {
  AnalyticLoop periodic;
  int offset = 0;

  double operator()(double x) const;
  cplx at(cplx x) const;  // analytic continuation off the real axis
  cplx derivative_at(cplx x) const;
};

// Base-branch lift of a circle diffeomorphism given as a loop with |h| = 1.
Lift lift_of_circle_map(const AnalyticLoop& h);

struct Decomposition {
  DiskMap q;
  Deformation h;
  double cr = 1.0;
  double rot = 0.0;
  Lift h_lift;
  double residual = 0;  // sup |q(h(z)) - phi(z)|
};

Decomposition decompose(const Deformation& phi, int rot_iters = 100000);
double conformal_radius(const Deformation& phi);

struct TranslationNumber {
  double value = 0;
  double error_bound = 0;
  bool fixed_point = false;
};

TranslationNumber translation_number(const Lift& lift, int n_iter = 100000);
double rotation_number(const Deformation& phi, int n_iter = 100000);
cplx rcr(const Deformation& phi, int n_iter = 100000);

struct OmegaRcr {
  cplx value;
  cplx log_cr_term;  // (i/12) log(CR12 / (CR1 CR2))
  double t1 = 0, t2 = 0, t12 = 0;
  int branch = 0;   // integer k with composed lift = base lift of h12 + 2 pi k
  int offset1 = 0, offset2 = 0;
};

// Offsets shift the factor lifts h^_1, h^_2 by 2 pi k.
OmegaRcr omega_rcr(const Deformation& phi1, const Deformation& phi2, int offset1 = 0, int offset2 = 0,
                   int n_iter = 100000);
OmegaRcr omega_rcr(const Decomposition& d1, const Decomposition& d2, const Decomposition& d12, int offset1 = 0,
                   int offset2 = 0);

// Koebe alternation for the region between two counterclockwise loops.
// On return the images of both loops lie on |z| = 1 and |z| = e^{-2 pi tau},
// rotated so that the outer image of z = 1 is 1.
struct AnnulusUniformization {
  double tau = 0;
  AnalyticLoop outer, inner;  // images of the input parametrizations
  Lift outer_lift, inner_lift;
  int iterations = 0;
  double defect = 0;
};

AnnulusUniformization annulus_uniformize(const AnalyticLoop& outer, const AnalyticLoop& inner, double tol = 1e-9,
                                         int max_alternations = 200);

}  // namespace defc
