#include "defc/witt.hpp"

#include <algorithm>
#include <cmath>

namespace defc {

VectorField::VectorField() : loop_(AnalyticLoop::constant(0.0)) {}

cplx VectorField::theta_value(double theta) const {
  cplx z = std::polar(1.0, theta);
  return cplx(0, -1) * std::conj(z) * loop_.eval_raw(z);
}

AnalyticLoop VectorField::theta_loop() const {
  std::map<int, cplx> m;
  for (auto [n, c] : loop_.coeff_map()) m[n - 1] = cplx(0, -1) * c;
  int modes = loop_.modes() + (loop_.lowest_degree() == -loop_.modes() ? 1 : 0);
  return AnalyticLoop::from_coeffs(m, modes, std::max(loop_.sample_count(), 4 * modes));
}

VectorField generator(int n, int modes) {
  int nm = modes > 0 ? modes : default_modes();
  if (std::abs(n) > nm - 1) throw Error(ErrorKind::DegreeBound, "generator index " + std::to_string(n));
  return VectorField::from_coeffs({{n + 1, -1.0}}, nm);
}

VectorField generator_i(int n, int modes) { return generator(n, modes) * cplx(0, 1); }

VectorField tangential(int n, int modes) { return (generator(n, modes) - generator(-n, modes)) * 0.5; }

VectorField bracket(const VectorField& v, const VectorField& w) {
  auto a = v.loop().coeff_map(), b = w.loop().coeff_map();
  int n = std::max(v.modes(), w.modes());
  std::map<int, cplx> out;
  int top = 0;
  for (auto [i, ai] : a)
    for (auto [j, bj] : b) {
      if (i == j) continue;
      int k = i + j - 1;
      out[k] += ai * bj * static_cast<double>(j - i);
    }
  for (auto it = out.begin(); it != out.end();) {
    if (it->second == cplx{}) it = out.erase(it);
    else top = std::max(top, std::abs(it->first)), ++it;
  }
  if (top > 2 * n) throw Error(ErrorKind::TruncationOverflow, "bracket degree " + std::to_string(top));
  int modes = std::max(n, top);
  return VectorField::from_coeffs(out, modes);
}

VectorField pullback(const AnalyticLoop& f, const VectorField& v) {
  int n = std::max(f.modes(), v.modes());
  int d;
  cplx a;
  if (f.is_monomial(d, a) && (d == 1 || d == -1)) {
    std::map<int, cplx> m;
    int top = 0;
    for (auto [k, c] : v.loop().coeff_map()) {
      int deg = k * d - d + 1;
      m[deg] = c * std::pow(a, k - 1) / static_cast<double>(d);
      top = std::max(top, std::abs(deg));
    }
    return VectorField::from_coeffs(m, std::max(n, top));
  }
  int m = 2 * std::max(f.sample_count(), v.loop().sample_count());
  auto fz = f.values_on_grid(m);
  auto df = f.derivative().values_on_grid(m);
  std::vector<cplx> out(m);
  for (int k = 0; k < m; ++k) out[k] = v.loop().evaluate(fz[k]).value / df[k];
  return VectorField(AnalyticLoop::from_samples(out, n));
}

Deformation exact_flow(int n, cplx t, int modes) {
  int nm = modes > 0 ? modes : default_modes();
  if (n == 0) return make_deformation(AnalyticLoop::from_coeffs({{1, std::exp(-t)}}, nm));
  if (t == cplx{}) return identity_deformation(nm);
  double rs = std::pow(std::abs(static_cast<double>(n) * t), -1.0 / n);
  if ((n > 0 && rs < 1.1) || (n < 0 && rs > 1.0 / 1.1))
    throw Error(ErrorKind::NotCertified, "branch point of the flow at radius " + std::to_string(rs));
  int m = 2 * (nm == default_modes() ? default_samples() : 4 * nm);
  auto z = roots_of_unity(m);
  std::vector<cplx> v(m);
  for (int k = 0; k < m; ++k) {
    cplx u = static_cast<double>(n) * t * std::pow(z[k], n);
    v[k] = z[k] * std::exp(-std::log(1.0 + u) / static_cast<double>(n));
  }
  return make_deformation(AnalyticLoop::from_samples(v, nm));
}

TimeField TimeField::constant(const VectorField& v) {
  TimeField f;
  f.knots = {0.0};
  f.fields = {v};
  return f;
}

void TimeField::weights(double t, int idx[4], double w[4]) const {
  int k = static_cast<int>(knots.size());
  for (int j = 0; j < 4; ++j) idx[j] = 0, w[j] = 0;
  if (k == 1) {
    w[0] = 1;
    return;
  }
  int i = 0;
  while (i < k - 2 && t > knots[i + 1]) ++i;
  double d = knots[i + 1] - knots[i];
  double u = (t - knots[i]) / d;
  double h00 = 2 * u * u * u - 3 * u * u + 1, h10 = u * u * u - 2 * u * u + u;
  double h01 = -2 * u * u * u + 3 * u * u, h11 = u * u * u - u * u;
  // Catmull-Rom tangents m_j = (p_b - p_a) / (t_b - t_a), one-sided at the ends.
  // Accumulate into a small dense buffer indexed by absolute knot.
  int base = std::max(i - 1, 0);
  double buf[4] = {0, 0, 0, 0};
  auto add = [&](int knot, double val) { buf[knot - base] += val; };
  add(i, h00);
  add(i + 1, h01);
  for (int side = 0; side < 2; ++side) {
    int j = i + side;
    double s = (side == 0 ? h10 : h11) * d;
    int a = std::max(j - 1, 0), b = std::min(j + 1, k - 1);
    double c = s / (knots[b] - knots[a]);
    add(b, c);
    add(a, -c);
  }
  for (int j = 0; j < 4; ++j) {
    idx[j] = std::min(base + j, k - 1);
    w[j] = base + j <= k - 1 ? buf[j] : 0.0;
  }
}

cplx TimeField::eval(double t, cplx z) const {
  int idx[4];
  double w[4];
  weights(t, idx, w);
  cplx s = 0;
  for (int j = 0; j < 4; ++j)
    if (w[j] != 0) s += w[j] * fields[idx[j]].loop().eval_raw(z);
  return s;
}

VectorField TimeField::at(double t) const {
  int idx[4];
  double w[4];
  weights(t, idx, w);
  VectorField s = fields[0] * 0.0;
  for (int j = 0; j < 4; ++j)
    if (w[j] != 0) s = s + fields[idx[j]] * w[j];
  return s;
}

bool TimeField::certified_at(double rho) const {
  for (auto& f : fields)
    if (!f.loop().certified_at(rho)) return false;
  return true;
}

namespace {

int flow_grid(const TimeField& v) {
  int m = 0;
  for (auto& f : v.fields) m = std::max(m, f.loop().sample_count());
  return 2 * m;
}

int flow_modes(const TimeField& v) {
  int n = 0;
  for (auto& f : v.fields) n = std::max(n, f.modes());
  return n;
}

std::vector<cplx> rk4_points(const TimeField& v, double t_end, int steps, std::vector<cplx> y) {
  double dt = t_end / steps;
  auto f = [&](double t, cplx p) {
    if (!v.certified_at(std::abs(p))) throw Error(ErrorKind::FlowExit, "trajectory left the certified annulus");
    return v.eval(t, p);
  };
  for (auto& p : y) {
    double t = 0;
    for (int s = 0; s < steps; ++s) {
      cplx k1 = f(t, p);
      cplx k2 = f(t + dt / 2, p + dt / 2 * k1);
      cplx k3 = f(t + dt / 2, p + dt / 2 * k2);
      cplx k4 = f(t + dt, p + dt * k3);
      p += dt / 6 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      t = (s + 1) * dt;
    }
  }
  return y;
}

// Coefficients (index n + N) to values on an m-point grid and back, truncating.
std::vector<cplx> to_grid(const std::vector<cplx>& c, int n, int m) {
  std::vector<cplx> a(m, cplx{});
  for (int k = -n; k <= n; ++k) a[((k % m) + m) % m] += c[k + n];
  return fft_backward(a);
}

std::vector<cplx> from_grid(const std::vector<cplx>& v, int n) {
  int m = static_cast<int>(v.size());
  auto f = fft_forward(v);
  std::vector<cplx> c(2 * n + 1);
  for (int k = -n; k <= n; ++k) c[k + n] = f[((k % m) + m) % m] / static_cast<double>(m);
  return c;
}

std::vector<cplx> right_rhs(const TimeField& w, double t, const std::vector<cplx>& c, int n, int m,
                            const std::vector<cplx>& z) {
  std::vector<cplx> d(2 * n + 1, cplx{});
  for (int k = -n; k <= n; ++k)
    if (k != 0 && k - 1 >= -n) d[k - 1 + n] = static_cast<double>(k) * c[k + n];
  auto dv = to_grid(d, n, m);
  for (int j = 0; j < m; ++j) dv[j] *= w.eval(t, z[j]);
  return from_grid(dv, n);
}

std::vector<cplx> rk4_right(const TimeField& w, double t_end, int steps, int n, int m) {
  auto z = roots_of_unity(m);
  std::vector<cplx> c(2 * n + 1, cplx{});
  c[1 + n] = 1.0;
  double dt = t_end / steps;
  auto axpy = [](const std::vector<cplx>& a, double s, const std::vector<cplx>& b) {
    std::vector<cplx> r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + s * b[i];
    return r;
  };
  for (int s = 0; s < steps; ++s) {
    double t = s * dt;
    auto k1 = right_rhs(w, t, c, n, m, z);
    auto k2 = right_rhs(w, t + dt / 2, axpy(c, dt / 2, k1), n, m, z);
    auto k3 = right_rhs(w, t + dt / 2, axpy(c, dt / 2, k2), n, m, z);
    auto k4 = right_rhs(w, t + dt, axpy(c, dt, k3), n, m, z);
    for (size_t i = 0; i < c.size(); ++i) c[i] += dt / 6 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return c;
}

}  // namespace

FlowResult flow_ode(const TimeField& v, double t_end, int steps, double tol) {
  int m = flow_grid(v), n = flow_modes(v);
  auto z = roots_of_unity(m);
  auto fine = rk4_points(v, t_end, steps, z);
  auto coarse = rk4_points(v, t_end, std::max(1, steps / 2), z);
  double err = 0;
  for (int k = 0; k < m; ++k) err = std::max(err, std::abs(fine[k] - coarse[k]) / 15.0);
  if (err > tol) throw Error(ErrorKind::ErrorEstimate, "RK4 step-halving estimate " + std::to_string(err));
  return {make_deformation(AnalyticLoop::from_samples(fine, n)), err};
}

FlowResult flow_right(const TimeField& w, double t_end, int steps, double tol) {
  int m = flow_grid(w), n = flow_modes(w);
  auto fine = rk4_right(w, t_end, steps, n, m);
  auto coarse = rk4_right(w, t_end, std::max(1, steps / 2), n, m);
  double err = 0, scale = 0, edge = 0;
  for (size_t i = 0; i < fine.size(); ++i) {
    err = std::max(err, std::abs(fine[i] - coarse[i]) / 15.0);
    scale = std::max(scale, std::abs(fine[i]));
  }
  for (int k = n - 7; k <= n; ++k) edge = std::max({edge, std::abs(fine[k + n]), std::abs(fine[-k + n])});
  if (edge > 1e-9 * scale) throw Error(ErrorKind::ErrorEstimate, "right flow no longer resolved at the truncation degree");
  if (err > tol) throw Error(ErrorKind::ErrorEstimate, "RK4 step-halving estimate " + std::to_string(err));
  std::map<int, cplx> c;
  for (int k = -n; k <= n; ++k)
    if (fine[k + n] != cplx{}) c[k] = fine[k + n];
  return {make_deformation(AnalyticLoop::from_coeffs(c, n)), err};
}

Deformation field_flow(const VectorField& v, double t, int steps) {
  int d;
  cplx a;
  if (v.loop().is_zero()) return identity_deformation(v.modes());
  if (v.loop().is_monomial(d, a)) return exact_flow(d - 1, -a * t, v.modes());
  return flow_ode(TimeField::constant(v), t, steps, 1e-10).phi;
}

std::pair<VectorField, VectorField> curve_to_field(const Curve& gamma, double t, double h) {
  AnalyticLoop g = gamma(t).loop();
  AnalyticLoop dot = (gamma(t + h).loop() * 8.0 - gamma(t - h).loop() * 8.0 - gamma(t + 2 * h).loop() +
                      gamma(t - 2 * h).loop()) *
                     (1.0 / (12 * h));
  int n = g.modes();
  int m = 2 * g.sample_count();
  auto dv = dot.values_on_grid(m);
  auto gp = g.derivative().values_on_grid(m);
  std::vector<cplx> wv(m);
  for (int k = 0; k < m; ++k) wv[k] = dv[k] / gp[k];
  VectorField w(AnalyticLoop::from_samples(wv, n));

  Deformation ginv = invert(gamma(t));
  auto gi = ginv.loop().values_on_grid(m);
  std::vector<cplx> vv(m);
  for (int k = 0; k < m; ++k) vv[k] = dot.evaluate(gi[k]).value;
  VectorField v(AnalyticLoop::from_samples(vv, n));
  return {v, w};
}

}  // namespace defc
