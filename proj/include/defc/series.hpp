#pragma once

#include <complex>
#include <limits>
#include <map>
#include <vector>

#include "defc/error.hpp"

namespace defc {

using cplx = std::complex<double>;
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr int kMaxModes = 1024;

// Process-wide default truncation; the CLI overrides it from --modes/--samples.
void set_default_resolution(int modes, int samples = 0);
int default_modes();
int default_samples();

// Estimated annulus of convergence r_minus < |z| < r_plus.
struct Radii {
  double inner = 0.0;
  double outer = kInf;
  bool tail_unknown = false;  // a side did not decay into the floor
};

struct Evaluation {
  cplx value;
  double error_bound;
};

std::vector<cplx> fft_forward(const std::vector<cplx>& in);   // sum x_k e^{-2 pi i k n / M}
std::vector<cplx> fft_backward(const std::vector<cplx>& in);  // sum x_n e^{+2 pi i k n / M}
std::vector<cplx> roots_of_unity(int m);

// Truncated Laurent series sum_{|n| <= N} c_n z^n, with cached samples on the
// M-th roots of unity.
class AnalyticLoop {
 public:
  AnalyticLoop();  // zero loop at the default resolution

  static AnalyticLoop from_coeffs(const std::map<int, cplx>& coeffs, int modes = 0, int samples = 0);
  // Values at the m-th roots of unity, m = values.size(). Modes beyond `modes`
  // must be below `tail_tol` relative, otherwise TruncationOverflow.
  static AnalyticLoop from_samples(const std::vector<cplx>& values, int modes = 0,
                                   int samples = 0, double tail_tol = 1e-10);
  static AnalyticLoop identity(int modes = 0, int samples = 0);
  static AnalyticLoop constant(cplx c, int modes = 0, int samples = 0);

  int modes() const { return n_; }
  int sample_count() const { return static_cast<int>(samples_.size()); }
  cplx coeff(int n) const { return (n < -n_ || n > n_) ? cplx{} : c_[n + n_]; }
  const std::vector<cplx>& coeff_vector() const { return c_; }  // index n + N
  std::map<int, cplx> coeff_map() const;
  const std::vector<cplx>& samples() const { return samples_; }
  const Radii& radii() const { return radii_; }
  int lowest_degree() const { return lo_; }
  int highest_degree() const { return hi_; }
  bool is_zero() const { return lo_ > hi_; }
  double max_abs_coeff() const;

  bool certified_at(double modulus, double safety = 1.05) const;
  Evaluation evaluate(cplx z, double safety = 1.05) const;  // throws NotCertified
  cplx operator()(cplx z) const { return evaluate(z).value; }
  cplx eval_raw(cplx z) const;  // no certification

  std::vector<cplx> values_on_grid(int m) const;  // at the m-th roots of unity
  AnalyticLoop derivative() const;
  AnalyticLoop antiderivative() const;  // drops the degree -1 term
  AnalyticLoop resampled(int modes, int samples = 0) const;

  AnalyticLoop operator+(const AnalyticLoop& o) const;
  AnalyticLoop operator-(const AnalyticLoop& o) const;
  AnalyticLoop operator*(cplx s) const;
  AnalyticLoop times(const AnalyticLoop& o) const;  // pointwise product, sampled at 2M

  // Single-term loop a z^k? Used for exact substitutions.
  bool is_monomial(int& degree, cplx& coeff) const;

 private:
  void finish(int samples);
  void estimate_radii();

  int n_ = 0;
  std::vector<cplx> c_;
  std::vector<cplx> samples_;
  Radii radii_;
  int lo_ = 1, hi_ = 0;
  double pos_scale_ = 0, neg_scale_ = 0;  // intercepts of the fitted decay
};

// Sup norm of the difference of coefficient vectors / of grid values.
double coeff_distance(const AnalyticLoop& a, const AnalyticLoop& b);
double sup_distance(const AnalyticLoop& a, const AnalyticLoop& b, int m = 0);

int winding_number(const AnalyticLoop& loop, cplx about, int m = 0);
// Winding of a closed polyline; exact angle sum.
int polyline_winding(const std::vector<cplx>& pts, cplx about);

}  // namespace defc
