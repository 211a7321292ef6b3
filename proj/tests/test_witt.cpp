#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "defc/witt.hpp"

using namespace defc;

namespace {

double field_distance(const VectorField& a, const VectorField& b) { return coeff_distance(a.loop(), b.loop()); }

// (z^{-n} + n t)^{-1/n} evaluated directly, principal branch continued from t = 0.
cplx closed_form_flow(int n, cplx t, cplx z) {
  if (n == 0) return std::exp(-t) * z;
  return z * std::pow(1.0 + double(n) * t * std::pow(z, n), -1.0 / n);
}

double max_dev_on_circle(const Deformation& phi, int n, cplx t) {
  double e = 0;
  for (int k = 0; k < 64; ++k) {
    cplx z = std::polar(1.0, 2 * M_PI * k / 64);
    e = std::max(e, std::abs(phi(z) - closed_form_flow(n, t, z)));
  }
  return e;
}

}  // namespace

TEST_CASE("Witt relations") {
  for (int n = -8; n <= 8; ++n)
    for (int m = -8; m <= 8; ++m) {
      auto lhs = bracket(generator(n), generator(m));
      CHECK(field_distance(lhs, generator(n + m) * double(n - m)) <= 1e-12);
    }
  CHECK(field_distance(bracket(generator(1), generator(-1)), generator(0) * 2.0) == 0.0);
  CHECK(field_distance(bracket(generator(3), generator(3)), VectorField()) == 0.0);
}

TEST_CASE("brackets are antisymmetric and satisfy Jacobi") {
  auto u = VectorField::from_coeffs({{-1, cplx(0.2, 0.1)}, {1, 1.0}, {2, 0.3}});
  auto v = VectorField::from_coeffs({{0, 0.5}, {3, cplx(0, -0.4)}});
  auto w = VectorField::from_coeffs({{-2, 0.1}, {1, cplx(0.7, 0.2)}, {4, 0.05}});
  CHECK(field_distance(bracket(u, v), bracket(v, u) * -1.0) <= 1e-14);
  auto jac = bracket(u, bracket(v, w)) + bracket(v, bracket(w, u)) + bracket(w, bracket(u, v));
  CHECK(jac.loop().max_abs_coeff() <= 1e-13);
}

TEST_CASE("generators in theta coordinates") {
  auto l0 = generator(0);
  for (double th : {0.0, 0.4, 2.0}) CHECK(std::abs(l0.theta_value(th) - cplx(0, 1)) < 1e-15);
  // -(z^{n+1} - z^{1-n}) / 2 = -i z sin(n theta) and -(z^{n+1} + z^{1-n}) / 2i = i z cos(n theta)
  for (int n : {1, 2, 5})
    for (double th : {0.3, 1.1, 4.0}) {
      cplx z = std::polar(1.0, th);
      CHECK(std::abs(tangential(n)(z) - cplx(0, -1) * z * std::sin(n * th)) < 1e-14);
      VectorField perp = (generator(n) + generator(-n)) * cplx(0, -0.5);
      CHECK(std::abs(perp(z) - cplx(0, 1) * z * std::cos(n * th)) < 1e-14);
      // both are tangent to the circle: real in theta coordinates
      CHECK(std::abs(tangential(n).theta_value(th).imag()) < 1e-14);
    }
  CHECK(std::abs(generator_i(2)(0.5) - cplx(0, -0.125)) < 1e-15);
}

TEST_CASE("pullbacks") {
  auto v = VectorField::from_coeffs({{0, 0.3}, {1, 1.0}, {2, cplx(0.1, 0.2)}});
  CHECK(field_distance(pullback(AnalyticLoop::identity(), v), v) <= 1e-15);
  double tau = 0.07;
  for (int n : {-3, 0, 2}) {
    auto p = pullback(scaling(tau).loop(), generator(n));
    CHECK(field_distance(p, generator(n) * std::exp(-2 * M_PI * tau * n)) <= 1e-13);
  }
  // inversion: iota^* l_n = -l_{-n}
  auto inv = AnalyticLoop::from_coeffs({{-1, 1.0}});
  for (int n : {-2, 0, 1, 3}) CHECK(field_distance(pullback(inv, generator(n)), generator(-n) * -1.0) <= 1e-13);
}

TEST_CASE("pullback is functorial") {
  auto f = make_deformation(AnalyticLoop::from_coeffs({{1, 1.0}, {2, 0.05}}));
  auto g = make_deformation(AnalyticLoop::from_coeffs({{1, 0.9}, {0, 0.02}, {3, 0.01}}));
  auto v = VectorField::from_coeffs({{0, 1.0}, {1, 0.3}});
  auto a = pullback(compose(f, g).loop(), v);
  auto b = pullback(g.loop(), pullback(f.loop(), v));
  CHECK(field_distance(a, b) <= 1e-9);
}

TEST_CASE("exact flows") {
  CHECK(coeff_distance(exact_flow(0, 0.3).loop(), scaling(0.3 / (2 * M_PI)).loop()) <= 1e-15);
  CHECK(coeff_distance(exact_flow(3, 0.0).loop(), AnalyticLoop::identity()) <= 1e-15);
  CHECK(coeff_distance(exact_flow(0, cplx(0, 0.5)).loop(), rotation(-0.5).loop()) <= 1e-15);
  for (int n : {-2, -1, 1, 2, 4}) CHECK(max_dev_on_circle(exact_flow(n, 0.05), n, 0.05) <= 1e-12);
  CHECK(max_dev_on_circle(exact_flow(1, cplx(0.02, 0.03)), 1, cplx(0.02, 0.03)) <= 1e-12);
  auto f = exact_flow(1, 0.1);
  CHECK(std::abs(f(cplx(0, 1)) - cplx(0, 1) / cplx(1, 0.1)) < 1e-13);
}

TEST_CASE("flows of a fixed generator form a one-parameter group") {
  for (int n : {-1, 2}) {
    auto a = compose(exact_flow(n, 0.03), exact_flow(n, 0.04));
    CHECK(coeff_distance(a.loop(), exact_flow(n, 0.07).loop()) <= 1e-12);
  }
}

TEST_CASE("numerical flows match closed forms") {
  CHECK(coeff_distance(field_flow(VectorField(), 1.0).loop(), AnalyticLoop::identity()) == 0.0);
  CHECK(coeff_distance(field_flow(generator(0), 0.3).loop(), AnalyticLoop::from_coeffs({{1, std::exp(-0.3)}})) <= 1e-8);
  for (int n : {1, -2}) {
    auto v = TimeField::constant(generator(n));
    auto left = flow_ode(v, 0.1, 200);
    CHECK(coeff_distance(left.phi.loop(), exact_flow(n, 0.1).loop()) <= 1e-8);
    auto right = flow_right(v, 0.1, 200);
    CHECK(coeff_distance(right.phi.loop(), exact_flow(n, 0.1).loop()) <= 1e-8);
  }
  auto mixed = generator(1) * 0.5 + generator(-1) * cplx(0, 0.3);
  auto a = flow_ode(TimeField::constant(mixed), 0.1, 200).phi;
  auto b = flow_right(TimeField::constant(mixed), 0.1, 200).phi;
  CHECK(coeff_distance(a.loop(), b.loop()) <= 1e-8);
}

TEST_CASE("tangent fields of curves") {
  // rotation(t): d/dt e^{it} z = i z, which is 1 in theta coordinates
  auto [v, w] = curve_to_field([](double t) { return rotation(t); }, 0.2, 1e-3);
  CHECK(field_distance(v, VectorField::from_coeffs({{1, cplx(0, 1)}})) <= 1e-10);
  CHECK(field_distance(w, v) <= 1e-10);
  CHECK(std::abs(v.theta_value(0.7) - 1.0) <= 1e-10);
  auto [s, s2] = curve_to_field([](double t) { return scaling(t); }, 0.0, 1e-3);
  CHECK(field_distance(s, generator(0) * (2 * M_PI)) <= 1e-9);
  auto [f, g] = curve_to_field([](double t) { return exact_flow(2, t); }, 0.02, 1e-3);
  CHECK(field_distance(f, generator(2)) <= 1e-8);
  CHECK(field_distance(g, generator(2)) <= 1e-8);
}
