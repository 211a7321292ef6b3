#include "defc/conformal.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

namespace defc {

namespace {

// Discrete harmonic conjugation on m equispaced points: multiplier -i sign(k),
// zero at k = 0 and at the Nyquist frequency.
const Eigen::MatrixXd& conjugation_matrix(int m) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<Eigen::MatrixXd>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[m];
  if (!slot) {
    std::vector<double> row(m, 0.0);
    for (int d = 0; d < m; ++d) {
      double delta = 2 * kPi * d / m, s = 0;
      for (int k = 1; k < m / 2; ++k) s += std::sin(k * delta);
      row[d] = 2.0 * s / m;
    }
    slot = std::make_unique<Eigen::MatrixXd>(m, m);
    for (int j = 0; j < m; ++j)
      for (int l = 0; l < m; ++l) (*slot)(j, l) = row[((j - l) % m + m) % m];
  }
  return *slot;
}

double wrap_pi(double a) {
  double k = std::round(a / (2 * kPi));
  double r = a - 2 * kPi * k;
  if (r <= -kPi) r += 2 * kPi;
  if (r > kPi) r -= 2 * kPi;
  return r;
}

// Unwrapped arguments of samples, starting from the principal value.
std::vector<double> unwrap(const std::vector<cplx>& v) {
  std::vector<double> a(v.size());
  a[0] = std::arg(v[0]);
  for (size_t k = 1; k < v.size(); ++k) a[k] = a[k - 1] + std::arg(v[k] / v[k - 1]);
  return a;
}

// Solves theta + s(theta) = sigma for theta.
double invert_shift(const AnalyticLoop& s, const AnalyticLoop& ds, double sigma) {
  double theta = sigma - std::real(s.eval_raw(std::polar(1.0, sigma)));
  for (int it = 0; it < 60; ++it) {
    cplx z = std::polar(1.0, theta);
    double r = theta + std::real(s.eval_raw(z)) - sigma;
    double d = 1.0 + std::real(cplx(0, 1) * z * ds.eval_raw(z));
    if (d <= 0) throw Error(ErrorKind::Monotonicity, "boundary correspondence is not increasing");
    theta -= r / d;
    if (std::abs(r) < 1e-15) break;
  }
  return theta;
}

}  // namespace

DiskMap riemann_map(const AnalyticLoop& boundary) {
  int n = boundary.modes();
  int m = std::max(boundary.sample_count(), 256);
  int mf = 2 * m;
  auto zf = roots_of_unity(mf);
  auto gf = boundary.values_on_grid(mf);
  for (int k = 0; k < mf; ++k) gf[k] /= zf[k];
  for (auto& v : gf)
    if (std::abs(v) == 0) throw Error(ErrorKind::NotSimple, "boundary passes through 0");
  auto arg = unwrap(gf);
  double closing = arg.back() + std::arg(gf[0] / gf.back()) - arg[0];
  if (std::abs(closing) > 1e-6) throw Error(ErrorKind::NotSimple, "boundary does not wind once about 0");
  std::vector<cplx> lam(mf);
  for (int k = 0; k < mf; ++k) lam[k] = cplx(std::log(std::abs(gf[k])), arg[k]);
  AnalyticLoop Lam = AnalyticLoop::from_samples(lam, m - 1, 0, 1e-11);
  AnalyticLoop dLam = Lam.derivative();

  const Eigen::MatrixXd& K = conjugation_matrix(m);
  auto zt = roots_of_unity(m);
  Eigen::VectorXd s = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd A(m), B(m), Ap(m), Bp(m);
  auto residual_of = [&](const Eigen::VectorXd& sv, Eigen::VectorXd& G) {
    for (int j = 0; j < m; ++j) {
      cplx z = zt[j] * std::polar(1.0, sv(j));
      cplx l = Lam.eval_raw(z);
      cplx dl = cplx(0, 1) * z * dLam.eval_raw(z);
      A(j) = l.real(), B(j) = l.imag(), Ap(j) = dl.real(), Bp(j) = dl.imag();
    }
    G = sv + B - K * A;
    return G.lpNorm<Eigen::Infinity>();
  };
  DiskMap out;
  Eigen::VectorXd G(m);
  double norm = residual_of(s, G);
  out.history.push_back(norm);
  for (int it = 0; it < 60 && norm > 1e-14; ++it) {
    Eigen::MatrixXd J = -K * Ap.asDiagonal();
    for (int j = 0; j < m; ++j) J(j, j) += 1.0 + Bp(j);
    Eigen::VectorXd delta = J.partialPivLu().solve(-G);
    double lam_step = 1.0;
    Eigen::VectorXd trial(m), Gt(m);
    double nt = kInf;
    for (int b = 0; b < 40; ++b) {
      trial = s + lam_step * delta;
      nt = residual_of(trial, Gt);
      if (nt < norm) break;
      lam_step *= 0.5;
    }
    if (!(nt < norm)) {
      residual_of(s, G);
      break;
    }
    s = trial;
    G = Gt;
    norm = nt;
    out.history.push_back(norm);
  }
  residual_of(s, G);

  std::vector<cplx> qb(m), fb(m), sv(m);
  for (int j = 0; j < m; ++j) {
    cplx z = zt[j] * std::polar(1.0, s(j));
    qb[j] = boundary.eval_raw(z);
    fb[j] = cplx(A(j), B(j) + s(j));
    sv[j] = s(j);
  }
  auto qc = fft_forward(qb);
  double top = 0, neg = 0, tail = 0;
  for (int k = 0; k < m; ++k) {
    int deg = k < m / 2 ? k : k - m;
    double a = std::abs(qc[k]) / m;
    if (deg < 0) neg = std::max(neg, a);
    else if (deg <= n) top = std::max(top, a);
    else tail = std::max(tail, a);
  }
  out.residual = neg / top;
  if (out.residual > 1e-10 || norm > 1e-9)
    throw Error(ErrorKind::NoConvergence, "Riemann map residual " + std::to_string(out.residual) + ", equation residual " +
                                              std::to_string(norm));
  if (tail > 1e-10 * top) throw Error(ErrorKind::TruncationOverflow, "Riemann map not resolved at the truncation degree");
  std::map<int, cplx> qm;
  for (int k = 0; k <= n; ++k) qm[k] = qc[k] / static_cast<double>(m);
  qm[0] = 0.0;
  out.deriv_at_zero = qm[1].real();
  qm[1] = out.deriv_at_zero;
  out.map = AnalyticLoop::from_coeffs(qm, n);
  auto fc = fft_forward(fb);
  std::map<int, cplx> gm;
  for (int k = 0; k < m / 2; ++k) gm[k] = fc[k] / static_cast<double>(m);
  gm[0] = gm[0].real();
  out.log_ratio = AnalyticLoop::from_coeffs(gm, m / 2 - 1);
  out.shift = AnalyticLoop::from_samples(sv, m / 2 - 1, 0, 1.0);
  return out;
}

double Lift::operator()(double x) const {
  return x + std::real(periodic.eval_raw(std::polar(1.0, x))) + 2 * kPi * offset;
}

cplx Lift::at(cplx x) const {
  return x + periodic.evaluate(std::exp(cplx(0, 1) * x)).value + 2 * kPi * static_cast<double>(offset);
}

cplx Lift::derivative_at(cplx x) const {
  cplx z = std::exp(cplx(0, 1) * x);
  return 1.0 + cplx(0, 1) * z * periodic.derivative().eval_raw(z);
}

Lift lift_of_circle_map(const AnalyticLoop& h) {
  int m = h.sample_count();
  auto v = h.samples();
  auto a = unwrap(v);
  double closing = a.back() + std::arg(v[0] / v.back()) - a[0];
  if (std::abs(closing - 2 * kPi) > 1e-6) throw Error(ErrorKind::Monotonicity, "circle map does not have degree one");
  std::vector<cplx> d(m);
  for (int k = 0; k < m; ++k) d[k] = a[k] - 2 * kPi * k / m;
  Lift l;
  l.periodic = AnalyticLoop::from_samples(d, h.modes());
  return l;
}

Decomposition decompose(const Deformation& phi, int rot_iters) {
  Decomposition out;
  out.q = riemann_map(phi.loop());
  int n = phi.modes();
  int m = 2 * phi.loop().sample_count();
  AnalyticLoop ds = out.q.shift.derivative();
  std::vector<cplx> hv(m), dv(m);
  for (int k = 0; k < m; ++k) {
    double sigma = 2 * kPi * k / m;
    double theta = invert_shift(out.q.shift, ds, sigma);
    hv[k] = std::polar(1.0, theta);
    dv[k] = theta - sigma;
  }
  int base = static_cast<int>(std::round(dv[0].real() / (2 * kPi)));
  if (wrap_pi(dv[0].real()) != dv[0].real() - 2 * kPi * base) base = static_cast<int>(std::floor(dv[0].real() / (2 * kPi) + 0.5));
  for (auto& d : dv) d -= 2 * kPi * base;
  if (dv[0].real() <= -kPi) for (auto& d : dv) d += 2 * kPi;
  if (dv[0].real() > kPi) for (auto& d : dv) d -= 2 * kPi;
  out.h = make_deformation(AnalyticLoop::from_samples(hv, n));
  out.h_lift.periodic = AnalyticLoop::from_samples(dv, n);
  out.cr = 1.0 / out.q.deriv_at_zero;
  double res = 0;
  auto phiv = phi.loop().values_on_grid(m);
  for (int k = 0; k < m; ++k) res = std::max(res, std::abs(out.q.map.eval_raw(hv[k]) - phiv[k]));
  out.residual = res;
  double t = translation_number(out.h_lift, rot_iters).value;
  out.rot = t - 2 * kPi * std::floor(t / (2 * kPi));
  if (out.rot >= 2 * kPi) out.rot = 0;
  return out;
}

double conformal_radius(const Deformation& phi) { return 1.0 / riemann_map(phi.loop()).deriv_at_zero; }

TranslationNumber translation_number(const Lift& lift, int n_iter) {
  TranslationNumber out;
  int m = std::max(8 * lift.periodic.modes(), 512);
  auto dv = lift.periodic.values_on_grid(m);
  double lo = kInf, hi = -kInf;
  for (auto& d : dv) lo = std::min(lo, d.real()), hi = std::max(hi, d.real());
  lo += 2 * kPi * lift.offset, hi += 2 * kPi * lift.offset;
  double jlo = std::ceil(lo / (2 * kPi)), jhi = std::floor(hi / (2 * kPi));
  if (jlo <= jhi) {
    out.value = 2 * kPi * jlo;
    out.fixed_point = true;
    return out;
  }
  double y = 0, total = 0;
  for (int j = 0; j < n_iter; ++j) {
    double step = lift(y) - y;
    total += step;
    y += step;
    y -= 2 * kPi * std::floor(y / (2 * kPi));
  }
  out.value = total / n_iter;
  out.error_bound = 2 * kPi / n_iter;
  return out;
}

double rotation_number(const Deformation& phi, int n_iter) { return decompose(phi, n_iter).rot; }

cplx rcr(const Deformation& phi, int n_iter) {
  Decomposition d = decompose(phi, n_iter);
  return std::polar(1.0, d.rot) / d.cr;
}

namespace {

// q^(x) = x - i g(e^{ix}), the lift of q anchored by g(0) real.
cplx q_lift(const DiskMap& q, cplx x) {
  return x - cplx(0, 1) * q.log_ratio.evaluate(std::exp(cplx(0, 1) * x)).value;
}

cplx q_lift_inverse(const DiskMap& q, cplx u) {
  AnalyticLoop dg = q.log_ratio.derivative();
  cplx y = u;
  for (int it = 0; it < 80; ++it) {
    cplx z = std::exp(cplx(0, 1) * y);
    cplx f = y - cplx(0, 1) * q.log_ratio.eval_raw(z) - u;
    if (std::abs(f) < 1e-14) return y;
    cplx d = 1.0 + z * dg.eval_raw(z);
    y -= f / d;
  }
  throw Error(ErrorKind::NewtonDivergence, "inverse of the disk-map lift");
}

}  // namespace

OmegaRcr omega_rcr(const Decomposition& d1, const Decomposition& d2, const Decomposition& d12, int offset1,
                   int offset2) {
  OmegaRcr out;
  out.offset1 = offset1, out.offset2 = offset2;
  Lift l1 = d1.h_lift, l2 = d2.h_lift;
  l1.offset += offset1;
  l2.offset += offset2;
  out.log_cr_term = cplx(0, 1.0 / 12) * std::log(d12.cr / (d1.cr * d2.cr));
  out.t1 = translation_number(l1).value;
  out.t2 = translation_number(l2).value;
  double t12_base = translation_number(d12.h_lift).value;
  cplx u = l2.at(0.0);
  u = q_lift(d2.q, u);
  u = l1.at(u);
  u = q_lift(d1.q, u);
  cplx y = q_lift_inverse(d12.q, u);
  if (std::abs(y.imag()) > 1e-6) throw Error(ErrorKind::NoConvergence, "composed lift is not real on the circle");
  out.branch = static_cast<int>(std::lround((y.real() - d12.h_lift(0.0)) / (2 * kPi)));
  out.t12 = t12_base + 2 * kPi * out.branch;
  out.value = out.log_cr_term - (out.t1 + out.t2 - out.t12) / 12.0;
  return out;
}

OmegaRcr omega_rcr(const Deformation& phi1, const Deformation& phi2, int offset1, int offset2, int n_iter) {
  std::string why;
  if (!is_composable(phi1, phi2, &why)) throw Error(ErrorKind::NotComposable, why);
  Deformation phi12 = compose(phi1, phi2);
  return omega_rcr(decompose(phi1, n_iter), decompose(phi2, n_iter), decompose(phi12, n_iter), offset1, offset2);
}

namespace {

AnalyticLoop reflect_invert(const AnalyticLoop& l) {
  // z -> 1 / l(1/z) on the circle, keeping counterclockwise orientation.
  int m = l.sample_count();
  const auto& v = l.samples();
  std::vector<cplx> out(m);
  for (int k = 0; k < m; ++k) out[k] = 1.0 / v[(m - k) % m];
  return AnalyticLoop::from_samples(out, l.modes(), m, 1e-10);
}

// One Koebe step: map the interior of `outer` to the disk. Returns images of both loops.
void koebe_step(AnalyticLoop& outer, AnalyticLoop& inner) {
  DiskMap q = riemann_map(outer);
  int n = outer.modes();
  int m = outer.sample_count();
  AnalyticLoop ds = q.shift.derivative();
  std::vector<cplx> ov(m);
  for (int k = 0; k < m; ++k) ov[k] = std::polar(1.0, invert_shift(q.shift, ds, 2 * kPi * k / m));
  AnalyticLoop dq = q.map.derivative();
  const auto& iv = inner.samples();
  int mi = inner.sample_count();
  std::vector<cplx> nv(mi);
  cplx w = iv[0] / q.deriv_at_zero;
  for (int k = 0; k < mi; ++k) {
    if (k == 0 || !newton_preimage(q.map, dq, iv[k], w, 1e-14, 80)) {
      w = iv[k] / q.deriv_at_zero;
      if (!newton_preimage(q.map, dq, iv[k], w, 1e-14, 200) && std::abs(q.map.eval_raw(w) - iv[k]) > 1e-12)
        throw Error(ErrorKind::NoConvergence, "Koebe step could not invert the disk map");
    }
    nv[k] = w;
  }
  outer = AnalyticLoop::from_samples(ov, n, m, 1e-10);
  inner = AnalyticLoop::from_samples(nv, inner.modes(), mi, 1e-10);
}

double log_spread(const AnalyticLoop& l) {
  double lo = kInf, hi = -kInf;
  for (auto& v : l.samples()) lo = std::min(lo, std::log(std::abs(v))), hi = std::max(hi, std::log(std::abs(v)));
  return hi - lo;
}

double mean_log(const AnalyticLoop& l) {
  double s = 0;
  for (auto& v : l.samples()) s += std::log(std::abs(v));
  return s / l.sample_count();
}

}  // namespace

AnnulusUniformization annulus_uniformize(const AnalyticLoop& outer, const AnalyticLoop& inner, double tol,
                                         int max_alternations) {
  if (winding_number(inner, 0.0) != 1 || winding_number(outer, 0.0) != 1)
    throw Error(ErrorKind::Degenerate, "boundary loops must wind once about 0");
  for (auto& p : inner.samples())
    if (polyline_winding(outer.values_on_grid(8 * outer.modes()), p) != 1)
      throw Error(ErrorKind::Degenerate, "inner boundary is not inside the outer boundary");
  AnnulusUniformization out;
  AnalyticLoop lo = outer, li = inner;
  if (log_spread(lo) <= tol && log_spread(li) <= tol) {
    double s = std::exp(-mean_log(lo));
    lo = lo * s;
    li = li * s;
  } else {
    for (int it = 0;; ++it) {
      koebe_step(lo, li);
      out.iterations = it + 1;
      out.defect = log_spread(li);
      if (out.defect <= tol) break;
      if (it + 1 >= max_alternations)
        throw Error(ErrorKind::NoConvergence, "Koebe alternation defect " + std::to_string(out.defect));
      AnalyticLoop a = reflect_invert(li), b = reflect_invert(lo);
      koebe_step(a, b);
      li = reflect_invert(a);
      lo = reflect_invert(b);
    }
  }
  out.defect = log_spread(li);
  cplx rot = std::polar(1.0, -std::arg(lo.samples()[0]));
  lo = lo * rot;
  li = li * rot;
  double r = std::exp(mean_log(li));
  out.tau = -std::log(r) / (2 * kPi);
  out.outer = lo;
  out.inner = li;
  out.outer_lift = lift_of_circle_map(lo);
  out.inner_lift = lift_of_circle_map(li * (1.0 / r));
  return out;
}

}  // namespace defc
