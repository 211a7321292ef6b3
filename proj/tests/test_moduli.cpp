#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "defc/moduli.hpp"

using namespace defc;

namespace {

Deformation poly(std::map<int, cplx> c) { return make_deformation(AnalyticLoop::from_coeffs(c, 64)); }

const Deformation& bump1() {
  static const Deformation d = poly({{1, 1.0}, {2, cplx(0.02, 0.01)}, {0, 0.01}});
  return d;
}
const Deformation& bump2() {
  static const Deformation d = poly({{1, 1.0}, {-1, cplx(0.0, 0.015)}, {3, 0.01}});
  return d;
}

}  // namespace

TEST_CASE("standard surfaces") {
  auto a = standard_annulus(0.25);
  CHECK(a.tau == 0.25);
  CHECK(a.kind == SurfaceKind::Annulus);
  CHECK(std::exp(-2 * M_PI * a.tau) * std::abs(a.psi(1.0)) == doctest::Approx(std::exp(-M_PI / 2)));
  CHECK(std::abs(modulus(a) - 0.25) <= 1e-14);
  auto d = cap_disk();
  CHECK(d.kind == SurfaceKind::Disk);
  CHECK(std::abs(1.0 / d.phi(1.0) - 1.0) == 0.0);
  CHECK_THROWS_AS(standard_annulus(0.0), Error);
  CHECK_THROWS_AS(standard_annulus(-0.1), Error);
  CHECK_THROWS_AS(modulus(d), Error);
}

TEST_CASE("boundary actions") {
  auto a = standard_annulus(0.2);
  CHECK(normal_form_distance(act_boundary(a, 1, identity_deformation()), a) <= 1e-12);
  CHECK(normal_form_distance(act_boundary(a, 2, identity_deformation()), a) <= 1e-12);
  for (double s : {0.01, 0.05}) {
    CHECK(std::abs(modulus(act_boundary(a, 2, scaling(s))) - (0.2 + s)) <= 1e-8);
    CHECK(std::abs(modulus(act_boundary(a, 1, scaling(s))) - (0.2 + s)) <= 1e-8);
  }
  CHECK(std::abs(modulus(act_boundary(a, 2, rotation(0.7))) - 0.2) <= 1e-10);
  CHECK(std::abs(modulus(act_boundary(a, 1, rotation(2.1))) - 0.2) <= 1e-10);
  CHECK_THROWS_AS(act_boundary(a, 3, rotation(0.1)), Error);
}

TEST_CASE("successive boundary actions compose") {
  auto a = standard_annulus(0.25);
  for (int j : {1, 2}) {
    auto two = act_boundary(act_boundary(a, j, bump1()), j, bump2());
    auto one = act_boundary(a, j, compose(bump1(), bump2()));
    CHECK(normal_form_distance(two, one) <= 1e-8);
  }
}

TEST_CASE("boundary actions at different components commute") {
  auto a = standard_annulus(0.25);
  auto x = act_boundary(act_boundary(a, 1, bump1()), 2, bump2());
  auto y = act_boundary(act_boundary(a, 2, bump2()), 1, bump1());
  CHECK(normal_form_distance(x, y) <= 1e-8);
  // a genuine dressing moves the normal form away from the standard one
  CHECK(normal_form_distance(x, a) > 1e-4);
}

TEST_CASE("sewing standard annuli adds moduli") {
  for (double t1 : {0.05, 0.1, 0.25, 0.5})
    for (double t2 : {0.05, 0.1, 0.25, 0.5})
      CHECK(std::abs(modulus(sew(standard_annulus(t1), 2, standard_annulus(t2), 1)) - (t1 + t2)) <= 1e-8);
  CHECK_THROWS_AS(sew(standard_annulus(0.1), 1, standard_annulus(0.1), 2), Error);
}

TEST_CASE("capping an annulus gives a disk") {
  auto d = sew(standard_annulus(0.1), 2, cap_disk(), 1);
  CHECK(d.kind == SurfaceKind::Disk);
  CHECK(normal_form_distance(d, cap_disk()) <= 1e-10);
}

TEST_CASE("modulus of a dressed sew agrees with a direct uniformization") {
  // seam at the dressed inner boundary: region between S^1 and the image of the
  // second annulus' inner circle under the seam map
  auto a = act_boundary(standard_annulus(0.1), 2, bump1());
  auto b = standard_annulus(0.15);
  auto s = sew(a, 2, b, 1);
  auto direct = sew(standard_annulus(0.1), 2, act_boundary(b, 1, conjugate_by_inversion(invert(bump1()))), 1);
  CHECK(normal_form_distance(s, direct) <= 1e-8);
}

TEST_CASE("unravel and sew are inverse") {
  double tau = 0.3, sigma = 0.12;
  auto [o, i] = unravel(standard_annulus(tau), std::exp(-2 * M_PI * sigma));
  CHECK(std::abs(o.tau - sigma) <= 1e-12);
  CHECK(std::abs(i.tau - (tau - sigma)) <= 1e-12);
  auto dressed = act_boundary(act_boundary(standard_annulus(tau), 1, bump1()), 2, bump2());
  auto [p, q] = unravel(dressed, 0.5);
  CHECK(normal_form_distance(sew(p, 2, q, 1), dressed) <= 1e-8);
  double inner = std::exp(-2 * M_PI * tau);
  CHECK_NOTHROW(unravel(standard_annulus(tau), inner * 1.01));
  CHECK_THROWS_AS(unravel(standard_annulus(tau), inner * 0.99), Error);
  CHECK_THROWS_AS(unravel(standard_annulus(tau), 1.0), Error);
}

TEST_CASE("interior actions") {
  double tau = 0.25, r = std::exp(-M_PI * tau);
  auto a = standard_annulus(tau);
  CHECK(normal_form_distance(act_interior(a, r, identity_deformation()), a) <= 1e-10);
  CHECK(std::abs(modulus(act_interior(a, r, scaling(0.05))) - 0.3) <= 1e-8);
  auto plain = act_interior(a, r, scaling(0.05));
  auto mirrored = act_interior_mirrored(a, r, scaling(0.05));
  CHECK(normal_form_distance(plain, mirrored) <= 1e-8);
  auto g = poly({{1, 1.0}, {2, 0.01}});
  CHECK(normal_form_distance(act_interior(a, r, g), act_interior_mirrored(a, r, g)) <= 1e-8);
}

TEST_CASE("Laurent split") {
  auto v = VectorField::from_coeffs({{-2, 0.1}, {0, 0.3}, {1, 0.5}, {3, cplx(0, 0.2)}});
  auto [in, out] = laurent_split(v);
  CHECK(in.loop().lowest_degree() >= 1);
  CHECK(out.loop().highest_degree() <= 0);
  CHECK(coeff_distance((in + out).loop(), v.loop()) == 0.0);
}

TEST_CASE("Virasoro uniformization residuals") {
  for (int n = -2; n <= 2; ++n) CHECK(virasoro_kernel_residual(0.25, generator(n)).residual <= 1e-6);
  CHECK(std::abs(single_boundary_rate(0.25, generator(0)) - 1 / (2 * M_PI)) <= 1e-6);
  double r = std::exp(-M_PI * 0.25);
  CHECK(interior_equals_boundary_residual(0.25, r, VectorField()).residual == 0.0);
  CHECK(interior_equals_boundary_residual(0.25, r, generator(0)).residual <= 1e-6);
  CHECK(interior_equals_boundary_residual(0.25, r, generator(2)).residual <= 1e-5);
}
