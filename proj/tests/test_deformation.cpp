#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "defc/deformation.hpp"

using namespace defc;

namespace {

ErrorKind kind_of(const AnalyticLoop& l) {
  try {
    make_deformation(l);
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::Io;  // sentinel: accepted
}

// Small perturbation of the identity with decaying random coefficients.
Deformation random_deformation(std::mt19937& rng, double eps) {
  std::uniform_real_distribution<double> u(-1, 1);
  std::map<int, cplx> c{{1, 1.0}};
  for (int k : {-2, -1, 0, 2, 3}) c[k] = eps * cplx(u(rng), u(rng)) / double(1 + std::abs(k - 1));
  return make_deformation(AnalyticLoop::from_coeffs(c, 64));
}

double binom_general(double a, int k) {
  double r = 1;
  for (int j = 0; j < k; ++j) r *= (a - j) / (j + 1);
  return r;
}

}  // namespace

TEST_CASE("validation rejects each failure mode") {
  CHECK(kind_of(AnalyticLoop::from_coeffs({{2, 1.0}})) == ErrorKind::NotInjective);
  CHECK(kind_of(AnalyticLoop::from_coeffs({{1, 1.0}, {0, -1.0}})) == ErrorKind::ZeroAttained);
  CHECK(kind_of(AnalyticLoop::from_coeffs({{-1, 1.0}})) == ErrorKind::WindingNotOne);
  CHECK(kind_of(AnalyticLoop::from_coeffs({{1, 1.0}, {2, 0.2}})) == ErrorKind::Io);
}

TEST_CASE("annular region of standard maps") {
  auto id = identity_deformation();
  CHECK(id.region().trivial);
  CHECK(id.region().contains(cplx(0, 1)));
  CHECK_FALSE(id.region().contains(cplx(0, 1.01)));
  auto s = scaling(0.1);
  double r = std::exp(-0.2 * M_PI);
  CHECK(s.region().r_min == doctest::Approx(r).epsilon(1e-12));
  CHECK(s.region().r_max == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s.region().contains(cplx(0.5 * (1 + r), 0)));
  CHECK_FALSE(s.region().contains(cplx(0.5 * r, 0)));
  auto q = make_deformation(AnalyticLoop::from_coeffs({{1, 1.0}, {2, 0.2}}));
  CHECK(q.region().r_max == doctest::Approx(1.2).epsilon(1e-6));
  CHECK(q.region().r_min == doctest::Approx(0.8).epsilon(1e-6));
}

TEST_CASE("composition of standard maps") {
  auto r = compose(rotation(0.3), rotation(0.4));
  CHECK(coeff_distance(r.loop(), rotation(0.7).loop()) < 1e-15);
  auto q = make_deformation(AnalyticLoop::from_coeffs({{1, 1.0}, {2, 0.2}}));
  auto half = make_deformation(AnalyticLoop::from_coeffs({{1, 0.5}}));
  auto c = compose(q, half);
  CHECK(coeff_distance(c.loop(), AnalyticLoop::from_coeffs({{1, 0.5}, {2, 0.05}})) < 1e-14);
  CHECK(coeff_distance(compose(identity_deformation(), q).loop(), q.loop()) < 1e-14);
  CHECK(coeff_distance(compose(q, identity_deformation()).loop(), q.loop()) < 1e-14);
}

TEST_CASE("rotations and scalings commute") {
  auto a = compose(rotation(0.9), scaling(0.05));
  auto b = compose(scaling(0.05), rotation(0.9));
  CHECK(coeff_distance(a.loop(), b.loop()) < 1e-15);
}

TEST_CASE("composability follows the region containment") {
  // pole at 0.8 limits the analyticity annulus from inside
  std::vector<cplx> v(512);
  auto z = roots_of_unity(512);
  for (int k = 0; k < 512; ++k) v[k] = z[k] + 0.01 / (z[k] - 0.8);
  auto f = make_deformation(AnalyticLoop::from_samples(v, 128));
  CHECK(f.loop().radii().inner == doctest::Approx(0.8).epsilon(0.02));
  std::string why;
  CHECK_FALSE(is_composable(f, scaling(0.5), &why));
  CHECK_FALSE(why.empty());
  CHECK(is_composable(f, scaling(0.003)));
  CHECK(is_composable(identity_deformation(), f));
  CHECK(is_composable(scaling(0.1), scaling(0.2)));
}

TEST_CASE("inverse coefficients match Lagrange reversion") {
  // f = 2 z + 0.1 z^2; [y^n] f^{-1} = (1/n) [z^{n-1}] (z / f)^n
  //   = (1/n) 2^{-n} C(-n, n-1) (0.05)^{n-1}
  auto f = make_deformation(AnalyticLoop::from_coeffs({{1, 2.0}, {2, 0.1}}));
  REQUIRE(is_invertible(f));
  auto g = invert(f);
  for (int n = 1; n <= 8; ++n) {
    double want = std::pow(2.0, -n) * binom_general(-n, n - 1) * std::pow(0.05, n - 1) / n;
    CHECK(std::abs(g.loop().coeff(n) - want) < 1e-12);
  }
  CHECK(coeff_distance(compose(f, g).loop(), AnalyticLoop::identity()) < 1e-9);
}

TEST_CASE("inverse round trip on a generic deformation") {
  std::mt19937 rng(5);
  for (int k = 0; k < 5; ++k) {
    auto f = random_deformation(rng, 0.03);
    auto g = invert(f);
    CHECK(coeff_distance(compose(f, g).loop(), AnalyticLoop::identity()) <= 1e-9);
    CHECK(coeff_distance(compose(g, f).loop(), AnalyticLoop::identity()) <= 1e-9);
  }
}

TEST_CASE("large perturbations are not invertible") {
  auto f = make_deformation(AnalyticLoop::from_coeffs({{1, 1.0}, {2, 0.45}}));
  CHECK_FALSE(is_invertible(f));
  CHECK_THROWS_AS(invert(f), Error);
}

TEST_CASE("composition is associative on seeded triples") {
  std::mt19937 rng(20261017);
  int checked = 0;
  for (int k = 0; k < 100; ++k) {
    auto a = random_deformation(rng, 0.02), b = random_deformation(rng, 0.02), c = random_deformation(rng, 0.02);
    if (!is_composable(a, b) || !is_composable(b, c)) continue;
    auto ab = compose(a, b), bc = compose(b, c);
    if (!is_composable(ab, c) || !is_composable(a, bc)) continue;
    CHECK(coeff_distance(compose(ab, c).loop(), compose(a, bc).loop()) <= 1e-9);
    ++checked;
  }
  CHECK(checked >= 50);
}

TEST_CASE("geometric helpers") {
  std::vector<cplx> sq{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  CHECK(polyline_is_simple(sq));
  std::vector<cplx> bow{{0, 0}, {1, 1}, {1, 0}, {0, 1}};
  CHECK_FALSE(polyline_is_simple(bow));
  auto q = AnalyticLoop::from_coeffs({{1, 1.0}, {2, 0.2}});
  cplx w = 0.9;
  REQUIRE(newton_preimage(q, q.derivative(), q(cplx(0.3, 0.8)), w));
  CHECK(std::abs(w - cplx(0.3, 0.8)) < 1e-12);
}
