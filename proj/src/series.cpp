#include "defc/series.hpp"

#include <fftw3.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <unordered_map>

namespace defc {

const char* kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::DegreeBound: return "degree bound exceeded";
    case ErrorKind::NotCertified: return "analytic continuation not certified here";
    case ErrorKind::PassesThroughPoint: return "loop passes through the point";
    case ErrorKind::UnderResolved: return "under-resolved";
    case ErrorKind::WindingNotOne: return "winding number is not +1";
    case ErrorKind::ZeroAttained: return "zero attained";
    case ErrorKind::NotInjective: return "not injective";
    case ErrorKind::NotComposable: return "not composable";
    case ErrorKind::NotInvertible: return "not invertible";
    case ErrorKind::NewtonDivergence: return "Newton divergence";
    case ErrorKind::TruncationOverflow: return "truncation overflow";
    case ErrorKind::FlowExit: return "flow exits certified annulus";
    case ErrorKind::ErrorEstimate: return "error estimate above tolerance";
    case ErrorKind::NoConvergence: return "no convergence";
    case ErrorKind::NotSimple: return "boundary not simple";
    case ErrorKind::Monotonicity: return "monotonicity failure";
    case ErrorKind::BranchWinding: return "branch winding is nonzero";
    case ErrorKind::Degenerate: return "degenerate region";
    case ErrorKind::OutOfRange: return "out of range";
    case ErrorKind::Schema: return "schema violation";
    case ErrorKind::UnknownSuite: return "unknown suite";
    case ErrorKind::Io: return "I/O failure";
  }
  return "error";
}

namespace {

std::atomic<int> g_modes{64};
std::atomic<int> g_samples{0};

constexpr double kChop = 1e-14;

struct PlanCache {
  std::mutex mu;
  std::unordered_map<long long, fftw_plan> plans;

  fftw_plan get(int m, int sign) {
    std::lock_guard<std::mutex> lock(mu);
    long long key = static_cast<long long>(m) * 4 + (sign > 0 ? 1 : 0);
    auto it = plans.find(key);
    if (it != plans.end()) return it->second;
    std::vector<cplx> a(m), b(m);
    fftw_plan p = fftw_plan_dft_1d(m, reinterpret_cast<fftw_complex*>(a.data()),
                                   reinterpret_cast<fftw_complex*>(b.data()), sign,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans[key] = p;
    return p;
  }
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

std::vector<cplx> run_fft(const std::vector<cplx>& in, int sign) {
  int m = static_cast<int>(in.size());
  std::vector<cplx> out(m);
  if (m == 0) return out;
  fftw_plan p = plan_cache().get(m, sign);
  std::vector<cplx> src(in);
  fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(src.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

int resolve_modes(int modes) { return modes > 0 ? modes : default_modes(); }

int resolve_samples(int n, int samples) {
  if (samples > 0) return std::max(samples, 4 * n);
  if (n == default_modes()) return std::max(default_samples(), 4 * n);
  return 4 * n;
}

// Least-squares fit of log e_k = a + s k.
bool fit_line(const std::vector<double>& xs, const std::vector<double>& ys, double& a, double& s) {
  size_t n = xs.size();
  if (n < 2) return false;
  double mx = 0, my = 0;
  for (size_t i = 0; i < n; ++i) mx += xs[i], my += ys[i];
  mx /= n, my /= n;
  double sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) sxx += (xs[i] - mx) * (xs[i] - mx), sxy += (xs[i] - mx) * (ys[i] - my);
  if (sxx == 0) return false;
  s = sxy / sxx;
  a = my - s * mx;
  return true;
}

}  // namespace

void set_default_resolution(int modes, int samples) {
  if (modes < 1 || modes > kMaxModes) throw Error(ErrorKind::DegreeBound, "modes " + std::to_string(modes));
  g_modes = modes;
  g_samples = samples > 0 ? std::max(samples, 4 * modes) : 0;
}
int default_modes() { return g_modes.load(); }
int default_samples() {
  int s = g_samples.load();
  return s > 0 ? s : 4 * default_modes();
}

std::vector<cplx> fft_forward(const std::vector<cplx>& in) { return run_fft(in, FFTW_FORWARD); }
std::vector<cplx> fft_backward(const std::vector<cplx>& in) { return run_fft(in, FFTW_BACKWARD); }

std::vector<cplx> roots_of_unity(int m) {
  std::vector<cplx> z(m);
  for (int k = 0; k < m; ++k) z[k] = std::polar(1.0, 2 * kPi * k / m);
  return z;
}

AnalyticLoop::AnalyticLoop() {
  n_ = default_modes();
  c_.assign(2 * n_ + 1, cplx{});
  finish(resolve_samples(n_, 0));
}

AnalyticLoop AnalyticLoop::from_coeffs(const std::map<int, cplx>& coeffs, int modes, int samples) {
  AnalyticLoop l;
  l.n_ = resolve_modes(modes);
  if (l.n_ > kMaxModes) throw Error(ErrorKind::DegreeBound, "modes above maximum");
  l.c_.assign(2 * l.n_ + 1, cplx{});
  for (auto [n, c] : coeffs) {
    if (n < -l.n_ || n > l.n_)
      throw Error(ErrorKind::DegreeBound, "degree " + std::to_string(n) + " exceeds " + std::to_string(l.n_));
    l.c_[n + l.n_] = c;
  }
  l.finish(resolve_samples(l.n_, samples));
  return l;
}

AnalyticLoop AnalyticLoop::from_samples(const std::vector<cplx>& values, int modes, int samples,
                                        double tail_tol) {
  int m = static_cast<int>(values.size());
  int n = resolve_modes(modes);
  if (m < 2 * n + 2) throw Error(ErrorKind::UnderResolved, "too few samples for the requested modes");
  std::vector<cplx> f = fft_forward(values);
  double head = 0, tail = 0;
  for (int k = 0; k < m; ++k) {
    int deg = k <= m / 2 - 1 ? k : k - m;
    double a = std::abs(f[k]) / m;
    if (deg >= -n && deg <= n) head = std::max(head, a);
    else tail = std::max(tail, a);
  }
  if (tail > tail_tol * head && tail > 1e-15)
    throw Error(ErrorKind::TruncationOverflow,
                "modes beyond " + std::to_string(n) + " reach " + std::to_string(tail / std::max(head, 1e-300)));
  AnalyticLoop l;
  l.n_ = n;
  l.c_.assign(2 * n + 1, cplx{});
  for (int deg = -n; deg <= n; ++deg) l.c_[deg + n] = f[((deg % m) + m) % m] / static_cast<double>(m);
  l.finish(resolve_samples(n, samples));
  return l;
}

AnalyticLoop AnalyticLoop::identity(int modes, int samples) { return from_coeffs({{1, 1.0}}, modes, samples); }

AnalyticLoop AnalyticLoop::constant(cplx c, int modes, int samples) {
  return from_coeffs({{0, c}}, modes, samples);
}

std::map<int, cplx> AnalyticLoop::coeff_map() const {
  std::map<int, cplx> m;
  for (int n = lo_; n <= hi_; ++n)
    if (c_[n + n_] != cplx{}) m[n] = c_[n + n_];
  return m;
}

double AnalyticLoop::max_abs_coeff() const {
  double m = 0;
  for (auto& c : c_) m = std::max(m, std::abs(c));
  return m;
}

void AnalyticLoop::finish(int samples) {
  double mx = max_abs_coeff();
  lo_ = 1, hi_ = 0;
  for (int n = -n_; n <= n_; ++n) {
    cplx& c = c_[n + n_];
    if (std::abs(c) <= kChop * mx) c = cplx{};
    if (c != cplx{}) {
      if (lo_ > hi_) lo_ = hi_ = n;
      else hi_ = n;
    }
  }
  samples_ = values_on_grid(samples);
  estimate_radii();
}

void AnalyticLoop::estimate_radii() {
  radii_ = Radii{};
  pos_scale_ = neg_scale_ = 0;
  if (is_zero()) return;
  // Coefficients below the absolute roundoff floor count as zero here.
  double floor = std::max(kChop * max_abs_coeff(), 1e-15);
  // side = +1 positive degrees, -1 negative degrees
  for (int side : {1, -1}) {
    auto at = [&](int k) { return std::abs(coeff(side * k)); };
    int last = side > 0 ? hi_ : -lo_;  // highest |degree| on this side above the floor
    while (last >= 1 && at(last) <= floor) --last;
    if (last < 1) continue;
    double top = at(last);
    bool terminated = last < n_ && top > 1e3 * floor;
    if (terminated) continue;  // a polynomial side: entire in that direction
    // A tail that flattened out in roundoff noise is fitted above the noise.
    int fit_end = last;
    while (fit_end >= 1 && at(fit_end) <= 1e2 * floor) --fit_end;
    bool in_noise = fit_end < last;
    if (fit_end < 1) continue;
    std::vector<double> xs, ys;
    double env = 0;
    for (int k = fit_end; k >= std::max(1, fit_end - 15); --k) {
      env = std::max(env, at(k));
      if (env > 0) xs.push_back(k), ys.push_back(std::log(env));
    }
    double a = 0, s = 0;
    double r = kInf;
    bool decays = false;
    if (fit_line(xs, ys, a, s) && s < -1e-3) {
      r = std::exp(-s);
      decays = true;
    }
    if (!decays && in_noise) continue;  // only a few coefficients above the noise
    if (!decays) {
      radii_.tail_unknown = true;
      r = 1.0 + 1e-9;
      a = std::log(std::max(top, floor));
    }
    if (!in_noise && last == n_ && top > 1e3 * floor) radii_.tail_unknown = true;
    if (side > 0) {
      radii_.outer = r;
      pos_scale_ = std::exp(a);
    } else {
      radii_.inner = 1.0 / r;
      neg_scale_ = std::exp(a);
    }
  }
}

bool AnalyticLoop::certified_at(double rho, double safety) const {
  if (std::abs(rho - 1.0) <= 1e-12) return true;
  if (rho < 1.0) {
    if (lo_ < 0 && rho == 0.0) return false;
    return rho >= radii_.inner * safety;
  }
  return rho <= radii_.outer / safety;
}

cplx AnalyticLoop::eval_raw(cplx z) const {
  if (is_zero()) return 0.0;
  cplx p = 0.0;
  for (int n = hi_; n >= 0; --n) p = p * z + c_[n + n_];
  if (lo_ >= 0) return p;
  cplx w = 1.0 / z;
  cplx q = 0.0;
  for (int m = -lo_; m >= 1; --m) q = q * w + c_[-m + n_];
  return p + q * w;
}

Evaluation AnalyticLoop::evaluate(cplx z, double safety) const {
  double rho = std::abs(z);
  if (!certified_at(rho, safety))
    throw Error(ErrorKind::NotCertified, "|z| = " + std::to_string(rho) + " outside [" +
                                             std::to_string(radii_.inner * safety) + ", " +
                                             std::to_string(radii_.outer / safety) + "]");
  Evaluation e{eval_raw(z), 0.0};
  double absum = 0;
  for (int n = lo_; n <= hi_; ++n) absum += std::abs(c_[n + n_]) * std::pow(rho, n);
  e.error_bound = 8 * std::numeric_limits<double>::epsilon() * absum;
  if (std::isfinite(radii_.outer) && pos_scale_ > 0 && rho > 0) {
    double q = rho / radii_.outer;
    if (q < 1) e.error_bound += pos_scale_ * std::pow(q, n_ + 1) / (1 - q);
  }
  if (radii_.inner > 0 && neg_scale_ > 0) {
    double q = radii_.inner / rho;
    if (q < 1) e.error_bound += neg_scale_ * std::pow(q, n_ + 1) / (1 - q);
  }
  return e;
}

std::vector<cplx> AnalyticLoop::values_on_grid(int m) const {
  std::vector<cplx> a(m, cplx{});
  for (int n = lo_; n <= hi_; ++n) a[((n % m) + m) % m] += c_[n + n_];
  return fft_backward(a);
}

AnalyticLoop AnalyticLoop::derivative() const {
  std::map<int, cplx> d;
  for (int n = lo_; n <= hi_; ++n)
    if (n != 0 && c_[n + n_] != cplx{}) d[n - 1] = static_cast<double>(n) * c_[n + n_];
  int modes = (lo_ == -n_ && coeff(-n_) != cplx{}) ? n_ + 1 : n_;
  return from_coeffs(d, modes, std::max(sample_count(), 4 * modes));
}

AnalyticLoop AnalyticLoop::antiderivative() const {
  std::map<int, cplx> d;
  for (int n = lo_; n <= hi_; ++n)
    if (n != -1 && c_[n + n_] != cplx{}) d[n + 1] = c_[n + n_] / static_cast<double>(n + 1);
  int modes = (hi_ == n_ && coeff(n_) != cplx{}) ? n_ + 1 : n_;
  return from_coeffs(d, modes, std::max(sample_count(), 4 * modes));
}

AnalyticLoop AnalyticLoop::resampled(int modes, int samples) const {
  std::map<int, cplx> m;
  for (int n = lo_; n <= hi_; ++n)
    if (c_[n + n_] != cplx{}) {
      if (std::abs(n) > modes) throw Error(ErrorKind::DegreeBound, "resample below occupied degree");
      m[n] = c_[n + n_];
    }
  return from_coeffs(m, modes, samples);
}

AnalyticLoop AnalyticLoop::operator+(const AnalyticLoop& o) const {
  int n = std::max(n_, o.n_);
  std::map<int, cplx> m;
  for (int k = -n; k <= n; ++k) {
    cplx v = coeff(k) + o.coeff(k);
    if (v != cplx{}) m[k] = v;
  }
  return from_coeffs(m, n, std::max(sample_count(), o.sample_count()));
}

AnalyticLoop AnalyticLoop::operator-(const AnalyticLoop& o) const { return *this + o * -1.0; }

AnalyticLoop AnalyticLoop::operator*(cplx s) const {
  std::map<int, cplx> m;
  for (int k = lo_; k <= hi_; ++k)
    if (c_[k + n_] != cplx{}) m[k] = c_[k + n_] * s;
  return from_coeffs(m, n_, sample_count());
}

AnalyticLoop AnalyticLoop::times(const AnalyticLoop& o) const {
  int n = std::max(n_, o.n_);
  int m = 2 * std::max(sample_count(), o.sample_count());
  auto a = values_on_grid(m), b = o.values_on_grid(m);
  for (int k = 0; k < m; ++k) a[k] *= b[k];
  return from_samples(a, n, m / 2);
}

bool AnalyticLoop::is_monomial(int& degree, cplx& coeff) const {
  if (lo_ != hi_) return false;
  degree = lo_;
  coeff = c_[lo_ + n_];
  return true;
}

double coeff_distance(const AnalyticLoop& a, const AnalyticLoop& b) {
  int n = std::max(a.modes(), b.modes());
  double d = 0;
  for (int k = -n; k <= n; ++k) d = std::max(d, std::abs(a.coeff(k) - b.coeff(k)));
  return d;
}

double sup_distance(const AnalyticLoop& a, const AnalyticLoop& b, int m) {
  if (m <= 0) m = std::max(a.sample_count(), b.sample_count());
  auto va = a.values_on_grid(m), vb = b.values_on_grid(m);
  double d = 0;
  for (int k = 0; k < m; ++k) d = std::max(d, std::abs(va[k] - vb[k]));
  return d;
}

int winding_number(const AnalyticLoop& loop, cplx about, int m) {
  if (m <= 0) m = loop.sample_count();
  auto f = loop.values_on_grid(m);
  auto d = loop.derivative().values_on_grid(m);
  auto z = roots_of_unity(m);
  double scale = 1.0 + std::abs(about);
  for (auto& v : f) scale = std::max(scale, std::abs(v));
  cplx sum = 0;
  for (int k = 0; k < m; ++k) {
    cplx diff = f[k] - about;
    if (std::abs(diff) <= 1e-12 * scale) throw Error(ErrorKind::PassesThroughPoint, "loop meets the point");
    sum += z[k] * d[k] / diff;
  }
  sum /= static_cast<double>(m);
  double w = std::round(sum.real());
  if (std::abs(sum - cplx(w, 0)) > 1e-6)
    throw Error(ErrorKind::UnderResolved, "winding quadrature residual " + std::to_string(std::abs(sum - cplx(w, 0))));
  return static_cast<int>(w);
}

int polyline_winding(const std::vector<cplx>& pts, cplx about) {
  double total = 0;
  size_t n = pts.size();
  for (size_t k = 0; k < n; ++k) {
    cplx a = pts[k] - about, b = pts[(k + 1) % n] - about;
    if (a == cplx{} || b == cplx{}) throw Error(ErrorKind::PassesThroughPoint, "polyline meets the point");
    total += std::arg(b / a);
  }
  return static_cast<int>(std::lround(total / (2 * kPi)));
}

}  // namespace defc
