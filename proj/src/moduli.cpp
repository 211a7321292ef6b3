#include "defc/moduli.hpp"

#include <algorithm>
#include <cmath>

namespace defc {

namespace {

// Loop z -> conj(l(conj z)); on the circle this reflects across the real axis.
AnalyticLoop reflect(const AnalyticLoop& l) {
  std::map<int, cplx> c;
  for (auto& [k, a] : l.coeff_map()) c[k] = std::conj(a);
  return AnalyticLoop::from_coeffs(c, l.modes(), l.sample_count());
}

// Loop z -> 1 / l(conj z), counterclockwise when l is.
AnalyticLoop inverted_reflection(const AnalyticLoop& l) {
  int m = l.sample_count();
  const auto& v = l.samples();
  std::vector<cplx> out(m);
  for (int k = 0; k < m; ++k) out[k] = 1.0 / v[(m - k) % m];
  return AnalyticLoop::from_samples(out, l.modes(), m);
}

bool is_identity(const Deformation& d) {
  int deg;
  cplx c;
  return d.loop().is_monomial(deg, c) && deg == 1 && std::abs(c - 1.0) <= 1e-15;
}

// Unique disk automorphism with a -> 1, b -> -i, c -> -1.
cplx three_point(cplx a, cplx b, cplx c, cplx z) {
  auto cross = [](cplx p, cplx q, cplx r, cplx x) { return (x - p) * (q - r) / ((x - r) * (q - p)); };
  cplx s = cross(a, b, c, z);
  // inverse of cross(1, -i, -1, .)
  cplx k = cplx(1, -1) / cplx(-1, -1);
  return (1.0 + s / k) / (1.0 - s / k);
}

BSurface normalize_disk(const BSurface& s) {
  AnalyticLoop outer = inverted_reflection(s.phi.loop());
  DiskMap q = riemann_map(outer);
  int m = outer.sample_count();
  AnalyticLoop ds = q.shift.derivative();
  // boundary correspondence G(outer(z)) on the circle
  std::vector<cplx> g(m);
  for (int k = 0; k < m; ++k) {
    double sigma = 2 * kPi * k / m;
    double theta = sigma - std::real(q.shift.eval_raw(std::polar(1.0, sigma)));
    for (int it = 0; it < 60; ++it) {
      cplx z = std::polar(1.0, theta);
      double r = theta + std::real(q.shift.eval_raw(z)) - sigma;
      theta -= r / (1.0 + std::real(cplx(0, 1) * z * ds.eval_raw(z)));
      if (std::abs(r) < 1e-15) break;
    }
    g[k] = std::polar(1.0, theta);
  }
  AnalyticLoop gl = AnalyticLoop::from_samples(g, outer.modes(), m);
  cplx a = gl.eval_raw(1.0), b = gl.eval_raw(cplx(0, -1)), c = gl.eval_raw(-1.0);
  // dressing phi'(z) = conj(M(G(outer(conj z)))), so phi'(i) = i needs M(G(outer(-i))) = -i
  std::vector<cplx> out(m);
  for (int k = 0; k < m; ++k) out[k] = std::conj(three_point(a, b, c, g[(m - k) % m]));
  BSurface r;
  r.kind = SurfaceKind::Disk;
  r.phi = make_deformation(AnalyticLoop::from_samples(out, s.phi.modes(), m));
  return r;
}

}  // namespace

BSurface standard_annulus(double tau) {
  if (!(tau > 0)) throw Error(ErrorKind::OutOfRange, "annulus modulus must be positive");
  BSurface s;
  s.tau = tau;
  return s;
}

BSurface cap_disk() {
  BSurface s;
  s.kind = SurfaceKind::Disk;
  return s;
}

Deformation conjugate_by_inversion(const Deformation& phi) {
  if (is_identity(phi)) return phi;
  int deg;
  cplx c;
  if (phi.loop().is_monomial(deg, c) && deg == 1)
    return make_deformation(AnalyticLoop::from_coeffs({{1, 1.0 / c}}, phi.modes(), phi.loop().sample_count()));
  int m = phi.loop().sample_count();
  const auto& v = phi.loop().samples();
  std::vector<cplx> out(m);
  for (int k = 0; k < m; ++k) out[k] = 1.0 / v[(m - k) % m];
  return make_deformation(AnalyticLoop::from_samples(out, phi.modes(), m));
}

BSurface normalize(const BSurface& s) {
  if (s.kind == SurfaceKind::Disk) return normalize_disk(s);
  AnalyticLoop outer = inverted_reflection(s.phi.loop());
  AnalyticLoop inner = s.psi.loop() * std::exp(-2 * kPi * s.tau);
  AnnulusUniformization u = annulus_uniformize(outer, inner, kNormalFormTol);
  BSurface r;
  r.tau = u.tau;
  r.phi = make_deformation(reflect(u.outer));
  r.psi = make_deformation(u.inner * std::exp(2 * kPi * u.tau));
  return r;
}

BSurface act_boundary(const BSurface& s, int j, const Deformation& phi) {
  BSurface r = s;
  if (j == 1) {
    r.phi = compose(s.phi, phi);
  } else if (j == 2 && s.kind == SurfaceKind::Annulus) {
    r.psi = compose(s.psi, phi);
  } else {
    throw Error(ErrorKind::OutOfRange, "no such boundary component");
  }
  return normalize(r);
}

BSurface sew(const BSurface& a, int j, const BSurface& b, int k) {
  if (a.kind != SurfaceKind::Annulus || j != 2 || k != 1)
    throw Error(ErrorKind::OutOfRange, "only boundary 2 of an annulus can be sewn to boundary 1");
  BSurface bn = is_identity(b.phi) && (b.kind == SurfaceKind::Disk || is_identity(b.psi)) ? b : normalize(b);
  // welding map: psi_a o iota o phi_b^{-1} o iota
  Deformation chi = is_identity(bn.phi) ? a.psi : compose(a.psi, conjugate_by_inversion(invert(bn.phi)));
  BSurface r;
  r.phi = a.phi;
  if (bn.kind == SurfaceKind::Disk) {
    int deg;
    cplx c;
    bool rotation_like = chi.loop().is_monomial(deg, c) && deg == 1;
    if (!rotation_like && chi.loop().lowest_degree() < 0)
      throw Error(ErrorKind::NotComposable, "welding map does not extend over the disk");
    r.kind = SurfaceKind::Disk;
    return normalize(r);
  }
  Deformation inner = compose(scaling(bn.tau), bn.psi);
  Deformation moved = compose(chi, inner);
  r.tau = a.tau + bn.tau;
  r.psi = make_deformation(moved.loop() * std::exp(2 * kPi * bn.tau));
  return normalize(r);
}

std::pair<BSurface, BSurface> unravel(const BSurface& s, double r) {
  if (s.kind != SurfaceKind::Annulus) throw Error(ErrorKind::OutOfRange, "unravel needs an annulus");
  BSurface n = normalize(s);
  double sigma = -std::log(r) / (2 * kPi);
  if (!(sigma > 0 && sigma < n.tau)) throw Error(ErrorKind::OutOfRange, "cut radius outside the annulus");
  BSurface outer, inner;
  outer.tau = sigma;
  outer.phi = n.phi;
  inner.tau = n.tau - sigma;
  inner.psi = n.psi;
  return {outer, inner};
}

BSurface act_interior(const BSurface& s, double r, const Deformation& phi) {
  auto [outer, inner] = unravel(s, r);
  outer.psi = compose(outer.psi, phi);
  return sew(outer, 2, inner, 1);
}

BSurface act_interior_mirrored(const BSurface& s, double r, const Deformation& phi) {
  auto [outer, inner] = unravel(s, r);
  inner.phi = compose(inner.phi, conjugate_by_inversion(invert(phi)));
  return sew(outer, 2, normalize(inner), 1);
}

double modulus(const BSurface& s) {
  if (s.kind != SurfaceKind::Annulus) throw Error(ErrorKind::OutOfRange, "modulus needs an annulus");
  return normalize(s).tau;
}

std::vector<double> normal_form_data(const BSurface& s, int degree) {
  std::vector<double> d{s.tau};
  for (const Deformation* f : {&s.phi, &s.psi})
    for (int k = -degree; k <= degree; ++k) {
      cplx c = f->loop().coeff(k);
      d.push_back(c.real());
      d.push_back(c.imag());
    }
  return d;
}

double normal_form_distance(const BSurface& a, const BSurface& b, int degree) {
  if (a.kind != b.kind) return kInf;
  auto x = normal_form_data(a, degree), y = normal_form_data(b, degree);
  double coeff = 0;
  for (size_t i = 1; i < x.size(); ++i) coeff = std::max(coeff, std::abs(x[i] - y[i]));
  return std::abs(x[0] - y[0]) + coeff;
}

std::vector<double> normal_form_tangent(const std::function<BSurface(double)>& curve, double h, int degree) {
  auto central = [&](double step) {
    auto p = normal_form_data(curve(step), degree), m = normal_form_data(curve(-step), degree);
    for (size_t i = 0; i < p.size(); ++i) p[i] = (p[i] - m[i]) / (2 * step);
    return p;
  };
  auto coarse = central(h), fine = central(h / 2);
  for (size_t i = 0; i < fine.size(); ++i) fine[i] = (4 * fine[i] - coarse[i]) / 3;
  return fine;
}

std::pair<VectorField, VectorField> laurent_split(const VectorField& v) {
  std::map<int, cplx> pos, rest;
  for (auto& [k, c] : v.loop().coeff_map()) (k >= 1 ? pos : rest)[k] = c;
  return {VectorField::from_coeffs(pos, v.modes()), VectorField::from_coeffs(rest, v.modes())};
}

namespace {

double sup_norm(const std::vector<double>& x) {
  double m = 0;
  for (double a : x) m = std::max(m, std::abs(a));
  return m;
}

AnalyticLoop inversion_loop(int modes) { return AnalyticLoop::from_coeffs({{-1, 1.0}}, modes); }

}  // namespace

TangentResidual virasoro_kernel_residual(double tau, const VectorField& v, double h) {
  BSurface base = standard_annulus(tau);
  VectorField v1 = pullback(inversion_loop(v.modes()), v);
  VectorField v2 = pullback(scaling(tau, v.modes()).loop(), v);
  TangentResidual out;
  out.tangent = normal_form_tangent(
      [&](double t) {
        BSurface s = base;
        s.phi = field_flow(v1, t);
        s.psi = field_flow(v2, t);
        return normalize(s);
      },
      h);
  out.residual = sup_norm(out.tangent);
  return out;
}

TangentResidual interior_equals_boundary_residual(double tau, double r, const VectorField& v, double h) {
  BSurface base = standard_annulus(tau);
  // the field on the cut loop |z| = r, in annulus coordinates
  AnalyticLoop theta_inv = AnalyticLoop::from_coeffs({{1, 1.0 / r}}, v.modes());
  VectorField x = pullback(theta_inv, v);
  auto [inward, outward] = laurent_split(x);
  VectorField b1 = pullback(inversion_loop(v.modes()), outward) * -1.0;
  VectorField b2 = pullback(scaling(tau, v.modes()).loop(), inward);
  auto lhs = normal_form_tangent([&](double t) { return act_interior(base, r, field_flow(v, t)); }, h);
  auto rhs = normal_form_tangent(
      [&](double t) {
        BSurface s = base;
        s.phi = field_flow(b1, t);
        s.psi = field_flow(b2, t);
        return normalize(s);
      },
      h);
  TangentResidual out;
  out.tangent = lhs;
  for (size_t i = 0; i < lhs.size(); ++i) lhs[i] -= rhs[i];
  out.residual = sup_norm(lhs);
  return out;
}

double single_boundary_rate(double tau, const VectorField& v, double h) {
  BSurface base = standard_annulus(tau);
  auto tangent = normal_form_tangent([&](double t) { return act_boundary(base, 2, field_flow(v, t)); }, h);
  return tangent[0];
}

}  // namespace defc
