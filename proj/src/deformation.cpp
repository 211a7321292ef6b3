#include "defc/deformation.hpp"

#include <algorithm>
#include <cmath>

namespace defc {

namespace {

constexpr double kProximity = 1e-6;

double orient(cplx a, cplx b, cplx c) { return std::imag(std::conj(b - a) * (c - a)); }

bool segments_cross(cplx a, cplx b, cplx c, cplx d) {
  double d1 = orient(c, d, a), d2 = orient(c, d, b), d3 = orient(a, b, c), d4 = orient(a, b, d);
  return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

double interp_periodic(const std::vector<double>& v, double beta) {
  int k = static_cast<int>(v.size());
  double x = beta / (2 * kPi) * k;
  x -= std::floor(x / k) * k;
  int j = static_cast<int>(std::floor(x));
  double f = x - j;
  return (1 - f) * v[j % k] + f * v[(j + 1) % k];
}

AnnularRegion build_region(const AnalyticLoop& loop) {
  AnnularRegion r;
  int k = 8 * loop.modes();
  auto z = roots_of_unity(k);
  auto f = loop.values_on_grid(k);
  AnalyticLoop dloop = loop.derivative();
  auto df = dloop.values_on_grid(k);
  r.curve = f;

  double dev = 0;
  for (int j = 0; j < k; ++j) dev = std::max(dev, std::abs(f[j] - z[j]));
  if (dev <= 1e-12) {
    r.trivial = true;
    r.outer = r.inner = z;
    r.r_in.assign(k, 1.0);
    r.r_out.assign(k, 1.0);
    return r;
  }
  // A diffeomorphism of the circle also has U = S^1.
  double mod_dev = 0;
  for (int j = 0; j < k; ++j) mod_dev = std::max(mod_dev, std::abs(std::abs(f[j]) - 1.0));
  r.trivial = mod_dev <= 1e-12;

  bool star = true;
  for (int j = 0; j < k; ++j)
    if (std::real(z[j] * df[j] / f[j]) <= 1e-8) star = false;

  if (star) {
    r.radial = true;
    r.r_in.resize(k);
    r.r_out.resize(k);
    r.outer.resize(k);
    r.inner.resize(k);
    // Unwrapped argument of the samples, increasing by 2 pi in total.
    std::vector<double> arg(k + 1);
    arg[0] = std::arg(f[0]);
    for (int j = 1; j <= k; ++j) arg[j] = arg[j - 1] + std::arg(f[j % k] / f[j - 1]);
    int seg = 0;
    for (int j = 0; j < k; ++j) {
      double beta = 2 * kPi * j / k;
      // bring beta into [arg0, arg0 + 2 pi)
      double b = beta + std::ceil((arg[0] - beta) / (2 * kPi)) * 2 * kPi;
      if (b >= arg[0] + 2 * kPi) b -= 2 * kPi;
      while (seg < k - 1 && arg[seg + 1] <= b) ++seg;
      while (seg > 0 && arg[seg] > b) --seg;
      double fr = (b - arg[seg]) / (arg[seg + 1] - arg[seg]);
      double theta = 2 * kPi * (seg + fr) / k;
      cplx dir = std::polar(1.0, beta);
      for (int it = 0; it < 8; ++it) {
        cplx zz = std::polar(1.0, theta);
        cplx v = loop.eval_raw(zz);
        double g = std::arg(v / dir);
        cplx dv = dloop.eval_raw(zz);
        double gp = std::real(zz * dv / v);
        theta -= g / gp;
        if (std::abs(g) < 1e-15) break;
      }
      double rho = std::abs(loop.eval_raw(std::polar(1.0, theta)));
      r.r_in[j] = std::min(1.0, rho);
      r.r_out[j] = std::max(1.0, rho);
      r.inner[j] = r.r_in[j] * dir;
      r.outer[j] = r.r_out[j] * dir;
    }
    r.r_min = *std::min_element(r.r_in.begin(), r.r_in.end());
    r.r_max = *std::max_element(r.r_out.begin(), r.r_out.end());
    return r;
  }
  // Non-radial: U is approximated by the points inside exactly one of the
  // two curves, together with both curves.
  r.radial = false;
  r.outer = f;
  r.inner = z;
  r.r_min = 1.0, r.r_max = 1.0;
  for (auto& v : f) r.r_min = std::min(r.r_min, std::abs(v)), r.r_max = std::max(r.r_max, std::abs(v));
  return r;
}

bool near_polyline(const std::vector<cplx>& pts, cplx p, double tol) {
  size_t n = pts.size();
  for (size_t j = 0; j < n; ++j) {
    cplx a = pts[j], b = pts[(j + 1) % n];
    cplx ab = b - a;
    double t = std::clamp(std::real((p - a) * std::conj(ab)) / std::max(std::norm(ab), 1e-300), 0.0, 1.0);
    if (std::abs(a + t * ab - p) <= tol) return true;
  }
  return false;
}

}  // namespace

bool AnnularRegion::contains(cplx p, double tol) const {
  double rho = std::abs(p);
  if (radial) {
    double beta = std::arg(p);
    double lo = interp_periodic(r_in, beta), hi = interp_periodic(r_out, beta);
    return rho >= lo - tol && rho <= hi + tol;
  }
  if (near_polyline(curve, p, tol) || std::abs(rho - 1.0) <= tol) return true;
  int a = polyline_winding(curve, p);
  int b = rho < 1.0 ? 1 : 0;
  return a != b;
}

std::vector<cplx> AnnularRegion::probes(int angles, int layers, double min_width) const {
  std::vector<cplx> out;
  if (trivial) return out;
  for (int j = 0; j < angles; ++j) {
    double beta = 2 * kPi * (j + 0.5) / angles;
    if (radial) {
      double lo = interp_periodic(r_in, beta), hi = interp_periodic(r_out, beta);
      if (hi - lo < min_width) continue;
      for (int l = 0; l < layers; ++l) {
        double rho = lo + (hi - lo) * (l + 0.5) / layers;
        out.push_back(std::polar(rho, beta));
      }
    } else {
      for (int l = 0; l < layers; ++l) {
        double rho = r_min + (r_max - r_min) * (l + 0.5) / layers;
        cplx p = std::polar(rho, beta);
        if (contains(p, 0.0) && !near_polyline(curve, p, min_width) && std::abs(rho - 1.0) > min_width)
          out.push_back(p);
      }
    }
  }
  return out;
}

double self_proximity(const std::vector<cplx>& f) {
  int k = static_cast<int>(f.size());
  auto z = roots_of_unity(k);
  double mean = 0;
  for (auto& v : f) mean += std::abs(v);
  mean /= k;
  double best = kInf;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) best = std::min(best, std::abs(f[i] - f[j]) / std::abs(z[i] - z[j]));
  return best / std::max(mean, 1e-300);
}

bool polyline_is_simple(const std::vector<cplx>& p) {
  int n = static_cast<int>(p.size());
  for (int i = 0; i < n; ++i)
    for (int j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      if (segments_cross(p[i], p[(i + 1) % n], p[j], p[(j + 1) % n])) return false;
    }
  return true;
}

Deformation::Deformation() : loop_(AnalyticLoop::identity()) { region_ = build_region(loop_); }

Deformation make_deformation(const AnalyticLoop& loop) {
  int k = 8 * loop.modes();
  auto f = loop.values_on_grid(k);
  double scale = 0;
  for (auto& v : f) scale = std::max(scale, std::abs(v));
  for (auto& v : f)
    if (!(std::abs(v) > 1e-10 * std::max(scale, 1e-300))) throw Error(ErrorKind::ZeroAttained, "phi vanishes on S^1");
  if (loop.radii().tail_unknown)
    throw Error(ErrorKind::UnderResolved, "Laurent tail does not decay at the truncation degree");
  if (self_proximity(f) <= kProximity) throw Error(ErrorKind::NotInjective, "two boundary samples nearly coincide");
  if (!polyline_is_simple(f)) throw Error(ErrorKind::NotInjective, "boundary curve self-intersects");
  int w = winding_number(loop, 0.0, k);
  if (w != 1) throw Error(ErrorKind::WindingNotOne, "winding " + std::to_string(w));
  Deformation d;
  d.loop_ = loop;
  d.region_ = build_region(loop);
  return d;
}

Deformation identity_deformation(int modes) { return make_deformation(AnalyticLoop::identity(modes)); }

Deformation rotation(double alpha, int modes) {
  return make_deformation(AnalyticLoop::from_coeffs({{1, std::polar(1.0, alpha)}}, modes));
}

Deformation scaling(double tau, int modes) {
  return make_deformation(AnalyticLoop::from_coeffs({{1, std::exp(-2 * kPi * tau)}}, modes));
}

bool is_composable(const Deformation& phi, const Deformation& psi, std::string* why) {
  auto fail = [&](const std::string& s) {
    if (why) *why = s;
    return false;
  };
  const AnnularRegion& u = psi.region();
  if (u.trivial) return true;
  const AnalyticLoop& f = phi.loop();
  if (!f.certified_at(u.r_min) || !f.certified_at(u.r_max))
    return fail("analyticity annulus of phi does not cover U(psi)");
  double scale = f.max_abs_coeff();
  for (cplx p : u.outer)
    if (f.evaluate(p).error_bound > 1e-9 * scale) return fail("evaluation error too large on the outer boundary");
  for (cplx p : u.inner)
    if (f.evaluate(p).error_bound > 1e-9 * scale) return fail("evaluation error too large on the inner boundary");

  std::vector<cplx> fo(u.outer.size()), fi(u.inner.size());
  for (size_t j = 0; j < u.outer.size(); ++j) fo[j] = f.eval_raw(u.outer[j]);
  for (size_t j = 0; j < u.inner.size(); ++j) fi[j] = f.eval_raw(u.inner[j]);
  try {
    if (polyline_winding(fo, 0.0) - polyline_winding(fi, 0.0) != 0) return fail("phi has zeros in U(psi)");
  } catch (const Error&) {
    return fail("phi vanishes on the boundary of U(psi)");
  }
  if (!polyline_is_simple(fo) || !polyline_is_simple(fi)) return fail("phi folds a boundary of U(psi)");
  for (cplx p : u.probes(64, 4)) {
    cplx w = f.eval_raw(p);
    try {
      int count = polyline_winding(fo, w) - polyline_winding(fi, w);
      if (count != 1) return fail("phi is not injective on U(psi)");
    } catch (const Error&) {
      return fail("probe value lies on the image boundary");
    }
  }
  return true;
}

Deformation compose(const Deformation& phi, const Deformation& psi) {
  std::string why;
  if (!is_composable(phi, psi, &why)) throw Error(ErrorKind::NotComposable, why);
  const AnalyticLoop& f = phi.loop();
  const AnalyticLoop& g = psi.loop();
  int n = std::max(f.modes(), g.modes());
  int deg;
  cplx a;
  if (g.is_monomial(deg, a) && deg == 1) {
    // phi(a z): exact coefficient scaling
    std::map<int, cplx> m;
    for (auto [k, c] : f.coeff_map()) m[k] = c * std::pow(a, k);
    return make_deformation(AnalyticLoop::from_coeffs(m, n));
  }
  if (f.is_monomial(deg, a) && deg == 1) return make_deformation(g.resampled(n) * a);
  int m = 2 * std::max(f.sample_count(), g.sample_count());
  auto gv = g.values_on_grid(m);
  for (auto& v : gv) v = f.eval_raw(v);
  return make_deformation(AnalyticLoop::from_samples(gv, n));
}

bool newton_preimage(const AnalyticLoop& phi, const AnalyticLoop& dphi, cplx target, cplx& w, double tol,
                     int max_iter) {
  for (int it = 0; it < max_iter; ++it) {
    if (!phi.certified_at(std::abs(w))) return false;
    cplx r = phi.eval_raw(w) - target;
    if (std::abs(r) <= tol) return true;
    cplx d = dphi.eval_raw(w);
    if (d == cplx{}) return false;
    cplx step = r / d;
    double lam = 1.0;
    bool improved = false;
    for (int b = 0; b < 30; ++b) {
      cplx cand = w - lam * step;
      if (phi.certified_at(std::abs(cand)) && std::abs(phi.eval_raw(cand) - target) < std::abs(r)) {
        w = cand;
        improved = true;
        break;
      }
      lam *= 0.5;
    }
    if (!improved) return std::abs(r) <= 10 * tol;
  }
  return std::abs(phi.eval_raw(w) - target) <= tol;
}

Deformation invert(const Deformation& phi) {
  const AnalyticLoop& f = phi.loop();
  int n = f.modes();
  int deg;
  cplx a;
  if (f.is_monomial(deg, a) && deg == 1) return make_deformation(AnalyticLoop::from_coeffs({{1, 1.0 / a}}, n));
  AnalyticLoop df = f.derivative();
  int m = 2 * f.sample_count();
  auto targets = roots_of_unity(m);
  int ks = 8 * n;
  auto zs = roots_of_unity(ks);
  auto fs = f.values_on_grid(ks);
  std::vector<cplx> w(m);
  bool have_prev = false;
  for (int k = 0; k < m; ++k) {
    cplx t = targets[k];
    cplx guess;
    bool ok = false;
    if (have_prev) {
      guess = w[k - 1];
      ok = newton_preimage(f, df, t, guess);
    }
    if (!ok) {
      int best = 0;
      for (int j = 1; j < ks; ++j)
        if (std::abs(fs[j] - t) < std::abs(fs[best] - t)) best = j;
      // Continuation in the target from phi(z_best) to t.
      guess = zs[best];
      cplx start = fs[best];
      int steps = 1;
      for (int attempt = 0; attempt < 6 && !ok; ++attempt, steps *= 4) {
        cplx g = zs[best];
        ok = true;
        for (int s = 1; s <= steps && ok; ++s) {
          cplx ts = start + (t - start) * (static_cast<double>(s) / steps);
          ok = newton_preimage(f, df, ts, g, s == steps ? 1e-12 : 1e-9);
        }
        if (ok) guess = g;
      }
    }
    if (!ok) throw Error(ErrorKind::NewtonDivergence, "no preimage found for e^{i theta_" + std::to_string(k) + "}");
    w[k] = guess;
    have_prev = true;
  }
  Deformation inv;
  try {
    inv = make_deformation(AnalyticLoop::from_samples(w, n));
  } catch (const Error& e) {
    throw Error(ErrorKind::NotInvertible, std::string("inverse samples do not form a deformation: ") + e.what());
  }
  std::string why;
  if (!is_composable(inv, phi, &why)) throw Error(ErrorKind::NotInvertible, "inverse does not extend over U(phi): " + why);
  if (!is_composable(phi, inv, &why)) throw Error(ErrorKind::NotInvertible, "phi does not extend over U(phi^-1): " + why);
  return inv;
}

bool is_invertible(const Deformation& phi) {
  try {
    invert(phi);
    return true;
  } catch (const Error&) {
    return false;
  }
}

}  // namespace defc
