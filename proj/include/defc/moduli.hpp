#pragma once

#include <utility>
#include <vector>

#include "defc/conformal.hpp"
#include "defc/witt.hpp"

namespace defc {

enum class SurfaceKind { Disk, Annulus };

// A_tau with boundary 1 parametrized by iota o phi and boundary 2 by
// e^{-2 pi tau} psi; a disk only uses phi. Operations return normal forms:
// round region, circle-diffeomorphism dressings, outer image of 1 equal to 1
// (disks: dressing fixes 1, i and -1).
struct BSurface {
  SurfaceKind kind = SurfaceKind::Annulus;
  double tau = 0;
  Deformation phi, psi;
};

BSurface standard_annulus(double tau);
BSurface cap_disk();

// Koebe tolerance used for every normal form.
inline constexpr double kNormalFormTol = 1e-12;

BSurface normalize(const BSurface& s);
BSurface act_boundary(const BSurface& s, int j, const Deformation& phi);
// Glues boundary 2 of `a` to boundary 1 of `b`; only j = 2, k = 1 is supported.
BSurface sew(const BSurface& a, int j, const BSurface& b, int k);
std::pair<BSurface, BSurface> unravel(const BSurface& s, double r);
BSurface act_interior(const BSurface& s, double r, const Deformation& phi);
// Same deformation realized on the other side of the cut by iota o phi^{-1} o iota.
BSurface act_interior_mirrored(const BSurface& s, double r, const Deformation& phi);
double modulus(const BSurface& s);

// tau followed by Re/Im of the dressing coefficients with |k| <= degree.
std::vector<double> normal_form_data(const BSurface& s, int degree = 8);
double normal_form_distance(const BSurface& a, const BSurface& b, int degree = 8);

// iota o phi o iota, z -> 1 / phi(1/z).
Deformation conjugate_by_inversion(const Deformation& phi);

struct TangentResidual {
  double residual = 0;
  std::vector<double> tangent;  // Richardson-extrapolated derivative of the normal-form data
};

// Derivative at t = 0 of the normal-form data along `curve`, central differences
// at +-h and +-h/2 with one Richardson level.
std::vector<double> normal_form_tangent(const std::function<BSurface(double)>& curve, double h, int degree = 8);

TangentResidual virasoro_kernel_residual(double tau, const VectorField& v, double h = 1e-3);
TangentResidual interior_equals_boundary_residual(double tau, double r, const VectorField& v, double h = 1e-3);
// d/dt modulus(A_tau with boundary 2 acted on by the flow of v).
double single_boundary_rate(double tau, const VectorField& v, double h = 1e-3);

// Laurent split of v into degrees >= 1 and degrees <= 0.
std::pair<VectorField, VectorField> laurent_split(const VectorField& v);

}  // namespace defc
