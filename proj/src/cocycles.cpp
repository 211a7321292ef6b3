#include "defc/cocycles.hpp"

#include <algorithm>
#include <cmath>

#include "defc/parallel.hpp"

namespace defc {

cplx bott_thurston(const Deformation& phi1, const Deformation& phi2, int samples) {
  std::string why;
  if (!is_composable(phi1, phi2, &why)) throw Error(ErrorKind::NotComposable, why);
  int m = samples > 0 ? samples : 2 * std::max(phi1.loop().sample_count(), phi2.loop().sample_count());
  AnalyticLoop d1 = phi1.loop().derivative();
  AnalyticLoop d2 = phi2.loop().derivative();
  AnalyticLoop dd2 = d2.derivative();
  auto z = roots_of_unity(m);
  auto p2 = phi2.loop().values_on_grid(m);
  auto p2d = d2.values_on_grid(m);
  auto p2dd = dd2.values_on_grid(m);
  std::vector<cplx> chain(m);
  for (int k = 0; k < m; ++k) chain[k] = d1.evaluate(p2[k]).value * p2d[k];
  double phase = std::arg(chain[0]);
  cplx sum = 0;
  for (int k = 0; k < m; ++k) {
    if (k > 0) phase += std::arg(chain[k] / chain[k - 1]);
    cplx log_chain(std::log(std::abs(chain[k])), phase);
    sum += log_chain * (p2dd[k] / p2d[k]) * cplx(0, 1) * z[k];
  }
  double closing = phase + std::arg(chain[0] / chain[m - 1]) - std::arg(chain[0]);
  if (std::abs(closing) > 1e-6) throw Error(ErrorKind::BranchWinding, "(phi1 o phi2)' winds around 0");
  return sum * (2 * kPi / m) / (24 * kPi);
}

namespace {

// d/dtheta of a Laurent series in e^{i theta}.
AnalyticLoop theta_derivative(const AnalyticLoop& f) {
  std::map<int, cplx> c;
  for (int k = f.lowest_degree(); k <= f.highest_degree(); ++k)
    if (k != 0) c[k] = cplx(0, k) * f.coeff(k);
  return AnalyticLoop::from_coeffs(c, f.modes());
}

// (1/2 pi) int f g dtheta by trapezoid on a grid that resolves the product.
cplx mean_of_product(const AnalyticLoop& f, const AnalyticLoop& g) {
  int m = 2 * (std::max(f.modes(), g.modes()) + 1);
  auto a = f.values_on_grid(m), b = g.values_on_grid(m);
  cplx s = 0;
  for (int k = 0; k < m; ++k) s += a[k] * b[k];
  return s / static_cast<double>(m);
}

}  // namespace

cplx gelfand_fuks(const VectorField& v, const VectorField& w) {
  AnalyticLoop dv = theta_derivative(v.theta_loop());
  AnalyticLoop ddw = theta_derivative(theta_derivative(w.theta_loop()));
  return mean_of_product(dv, ddw) * (2 * kPi) / (24 * kPi);
}

cplx omega_rot(const VectorField& v, const VectorField& w) {
  AnalyticLoop dw = theta_derivative(w.theta_loop());
  return mean_of_product(v.theta_loop(), dw) * (2 * kPi) / (24 * kPi);
}

cplx rot_functional(const VectorField& v) {
  AnalyticLoop t = v.theta_loop();
  int m = 2 * (t.modes() + 1);
  cplx s = 0;
  for (auto& x : t.values_on_grid(m)) s += x;
  return s / static_cast<double>(m) * (2 * kPi) / (48 * kPi);
}

GroupCochain2 bott_thurston_cochain() {
  return {"bt", [](const Deformation& a, const Deformation& b) { return bott_thurston(a, b); }};
}

GroupCochain2 rcr_cochain(int rot_iters) {
  return {"rcr", [rot_iters](const Deformation& a, const Deformation& b) {
            return omega_rcr(a, b, 0, 0, rot_iters).value;
          }};
}

GroupCochain1 log_cr_cochain() {
  return {"log_cr", [](const Deformation& g) { return cplx(std::log(conformal_radius(g))); }};
}

AlgebraCochain gelfand_fuks_cochain() {
  return {2, "gf", [](const std::vector<VectorField>& f) { return gelfand_fuks(f.at(0), f.at(1)); }};
}

AlgebraCochain omega_rot_cochain() {
  return {2, "rot", [](const std::vector<VectorField>& f) { return omega_rot(f.at(0), f.at(1)); }};
}

AlgebraCochain rot_cochain() {
  return {1, "rot_functional", [](const std::vector<VectorField>& f) { return rot_functional(f.at(0)); }};
}

cplx group_differential(const GroupCochain1& f, const Deformation& g1, const Deformation& g2) {
  return f(g2) - f(compose(g1, g2)) + f(g1);
}

cplx group_differential(const GroupCochain2& omega, const Deformation& g1, const Deformation& g2,
                        const Deformation& g3) {
  Deformation g12 = compose(g1, g2);
  Deformation g23 = compose(g2, g3);
  return omega(g2, g3) - omega(g12, g3) + omega(g1, g23) - omega(g1, g2);
}

GroupCochain2 coboundary(const GroupCochain1& f) {
  return {"D" + f.name, [f](const Deformation& a, const Deformation& b) { return group_differential(f, a, b); }};
}

cplx algebra_differential(const AlgebraCochain& c, const std::vector<VectorField>& fields) {
  if (static_cast<int>(fields.size()) != c.degree + 1)
    throw Error(ErrorKind::OutOfRange, "algebra_differential needs degree + 1 fields");
  if (c.degree == 1) return -c({bracket(fields[0], fields[1])});
  const auto &u = fields[0], &v = fields[1], &w = fields[2];
  return -c(bracket(u, v), w) + c(bracket(u, w), v) - c(bracket(v, w), u);
}

VanEst van_est(const GroupCochain2& omega, const VectorField& v, const VectorField& w, double h) {
  auto mixed = [&](double step) {
    cplx acc = 0;
    for (int a : {1, -1})
      for (int b : {1, -1}) {
        Deformation fv = field_flow(v, a * step), fw = field_flow(w, b * step);
        acc += static_cast<double>(a * b) * (omega(fv, fw) - omega(fw, fv));
      }
    return 0.5 * acc / (4 * step * step);
  };
  cplx coarse = mixed(h), fine = mixed(h / 2);
  VanEst out;
  out.value = (4.0 * fine - coarse) / 3.0;
  out.error_estimate = std::abs(fine - coarse) / 3.0;
  return out;
}

std::vector<RelationRow> cocycle_relation_residuals(int n_max, double h, int rot_iters) {
  std::vector<RelationRow> rows(2 * n_max);
  GroupCochain2 bt = bott_thurston_cochain(), rc = rcr_cochain(rot_iters);
  parallel_for(2 * n_max, [&](int i) {
    int n = i / 2 + 1;
    VectorField a = generator(n), b = generator(-n);
    RelationRow& r = rows[i];
    r.n = n;
    VanEst ve;
    if (i % 2 == 0) {
      r.relation = "bt";
      r.target = gelfand_fuks(a, b) - omega_rot(a, b);
      ve = van_est(bt, a, b, h);
    } else {
      r.relation = "rcr";
      r.target = omega_rot(a, b);
      ve = van_est(rc, a, b, h);
    }
    r.value = ve.value;
    r.error_estimate = ve.error_estimate;
    r.residual = std::abs(r.value - r.target);
  });
  return rows;
}

std::vector<Rational> cohomology_recursion(const Rational& c1, const Rational& c2, int n_max) {
  if (n_max < 3) throw Error(ErrorKind::OutOfRange, "cohomology_recursion needs n_max >= 3");
  std::vector<Rational> c{c1, c2};
  for (int n = 2; n < n_max; ++n) c.push_back(((n + 2) * c[n - 1] - (2 * n + 1) * c1) / (n - 1));
  return c;
}

}  // namespace defc
