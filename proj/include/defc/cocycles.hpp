#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <functional>
#include <string>
#include <vector>

#include "defc/conformal.hpp"
#include "defc/witt.hpp"

namespace defc {

using Rational = boost::multiprecision::cpp_rational;

struct GroupCochain1 {
  std::string name;
  std::function<cplx(const Deformation&)> eval;
  cplx operator()(const Deformation& g) const { return eval(g); }
};

struct GroupCochain2 {
  std::string name;
  std::function<cplx(const Deformation&, const Deformation&)> eval;
  cplx operator()(const Deformation& a, const Deformation& b) const { return eval(a, b); }
};

struct AlgebraCochain {
  int degree = 2;
  std::string name;
  std::function<cplx(const std::vector<VectorField>&)> eval;
  cplx operator()(const VectorField& v) const { return eval({v}); }
  cplx operator()(const VectorField& v, const VectorField& w) const { return eval({v, w}); }
};

// (1/24 pi) oint log((phi1 o phi2)') d log phi2'. `samples` = 0 picks twice the
// larger sample count of the arguments.
cplx bott_thurston(const Deformation& phi1, const Deformation& phi2, int samples = 0);
cplx gelfand_fuks(const VectorField& v, const VectorField& w);
cplx omega_rot(const VectorField& v, const VectorField& w);
cplx rot_functional(const VectorField& v);

GroupCochain2 bott_thurston_cochain();
GroupCochain2 rcr_cochain(int rot_iters = 100000);
GroupCochain1 log_cr_cochain();
AlgebraCochain gelfand_fuks_cochain();
AlgebraCochain omega_rot_cochain();
AlgebraCochain rot_cochain();

cplx group_differential(const GroupCochain1& f, const Deformation& g1, const Deformation& g2);
cplx group_differential(const GroupCochain2& omega, const Deformation& g1, const Deformation& g2,
                        const Deformation& g3);
GroupCochain2 coboundary(const GroupCochain1& f);

// (D f)(v, w) = -f([v, w]);  (D w)(u, v, w) = -w([u,v],w) + w([u,w],v) - w([v,w],u).
cplx algebra_differential(const AlgebraCochain& c, const std::vector<VectorField>& fields);

struct VanEst {
  cplx value;
  double error_estimate = 0;  // |D(h/2) - D(h)| / 3
};

// (1/2) d_t d_s [Omega(Phi_v(t), Phi_w(s)) - Omega(Phi_w(s), Phi_v(t))] at 0,
// central differences on the 2x2 stencil, one Richardson level.
VanEst van_est(const GroupCochain2& omega, const VectorField& v, const VectorField& w, double h = 1e-3);

struct RelationRow {
  std::string relation;  // "bt": omega_GF - omega_rot, "rcr": omega_rot
  int n = 0;
  cplx target, value;
  double residual = 0, error_estimate = 0;
};

std::vector<RelationRow> cocycle_relation_residuals(int n_max, double h = 1e-3, int rot_iters = 100000);

// c_{n+1} = ((n+2) c_n - (2n+1) c_1) / (n-1) for n >= 2; returns c_1 .. c_{n_max}.
std::vector<Rational> cohomology_recursion(const Rational& c1, const Rational& c2, int n_max);

}  // namespace defc
