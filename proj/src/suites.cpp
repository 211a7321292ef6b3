#include "defc/suites.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>

#include "defc/cocycles.hpp"
#include "defc/moduli.hpp"
#include "defc/parallel.hpp"

namespace defc {

bool SuiteReport::all_pass() const {
  for (auto& r : rows)
    if (!r.pass) return false;
  return true;
}

namespace {

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double parse_num(const std::string& s) {
  if (s == "inf") return kInf;
  if (s == "-inf") return -kInf;
  if (s == "nan" || s == "-nan") return std::nan("");
  return std::stod(s);
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

std::vector<std::string> csv_split(const std::string& line) {
  std::vector<std::string> f(1);
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') f.back() += '"', ++i;
      else if (c == '"') quoted = false;
      else f.back() += c;
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      f.emplace_back();
    } else {
      f.back() += c;
    }
  }
  return f;
}

json jnum(double x) { return std::isfinite(x) ? json(x) : json(num(x)); }
double from_jnum(const json& j) { return j.is_string() ? parse_num(j.get<std::string>()) : j.get<double>(); }

constexpr const char* kHeader = "check,target_re,target_im,value_re,value_im,residual,tolerance,pass,wall_time,note";

}  // namespace

std::string SuiteReport::to_csv() const {
  std::ostringstream os;
  os << "# suite: " << suite << "\n# seed: " << seed << "\n" << kHeader << "\n";
  for (auto& r : rows)
    os << csv_quote(r.id) << ',' << num(r.target.real()) << ',' << num(r.target.imag()) << ','
       << num(r.computed.real()) << ',' << num(r.computed.imag()) << ',' << num(r.residual) << ','
       << num(r.tolerance) << ',' << (r.pass ? "true" : "false") << ',' << num(r.wall_time) << ','
       << csv_quote(r.note) << "\n";
  return os.str();
}

SuiteReport SuiteReport::from_csv(const std::string& text) {
  SuiteReport rep;
  std::istringstream is(text);
  std::string line;
  bool header = false;
  while (std::getline(is, line)) {
    if (line.rfind("# suite: ", 0) == 0) {
      rep.suite = line.substr(9);
    } else if (line.rfind("# seed: ", 0) == 0) {
      rep.seed = std::stoull(line.substr(8));
    } else if (!header) {
      if (line != kHeader) throw Error(ErrorKind::Schema, "unexpected report header");
      header = true;
    } else if (!line.empty()) {
      auto f = csv_split(line);
      if (f.size() != 10) throw Error(ErrorKind::Schema, "report row needs 10 fields");
      CheckRow r;
      r.id = f[0];
      r.target = {parse_num(f[1]), parse_num(f[2])};
      r.computed = {parse_num(f[3]), parse_num(f[4])};
      r.residual = parse_num(f[5]);
      r.tolerance = parse_num(f[6]);
      r.pass = f[7] == "true";
      r.wall_time = parse_num(f[8]);
      r.note = f[9];
      rep.rows.push_back(r);
    }
  }
  return rep;
}

json SuiteReport::to_json() const {
  json rs = json::array();
  for (auto& r : rows)
    rs.push_back({{"check", r.id},
                  {"target_re", jnum(r.target.real())},
                  {"target_im", jnum(r.target.imag())},
                  {"value_re", jnum(r.computed.real())},
                  {"value_im", jnum(r.computed.imag())},
                  {"residual", jnum(r.residual)},
                  {"tolerance", jnum(r.tolerance)},
                  {"pass", r.pass},
                  {"wall_time", jnum(r.wall_time)},
                  {"note", r.note}});
  return {{"suite", suite}, {"seed", seed}, {"rows", rs}};
}

SuiteReport SuiteReport::from_json(const json& j) {
  SuiteReport rep;
  try {
    rep.suite = j.at("suite").get<std::string>();
    rep.seed = j.at("seed").get<std::uint64_t>();
    for (auto& r : j.at("rows")) {
      CheckRow c;
      c.id = r.at("check").get<std::string>();
      c.target = {from_jnum(r.at("target_re")), from_jnum(r.at("target_im"))};
      c.computed = {from_jnum(r.at("value_re")), from_jnum(r.at("value_im"))};
      c.residual = from_jnum(r.at("residual"));
      c.tolerance = from_jnum(r.at("tolerance"));
      c.pass = r.at("pass").get<bool>();
      c.wall_time = from_jnum(r.at("wall_time"));
      c.note = r.value("note", "");
      rep.rows.push_back(c);
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Schema, e.what());
  }
  return rep;
}

Deformation random_near_identity(std::uint64_t seed, double bound) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> radius(0.0, bound), angle(0.0, 2 * kPi);
  std::map<int, cplx> c{{1, 1.0}};
  for (int k : {-1, 0, 2, 3}) c[k] += std::polar(radius(rng), angle(rng));
  return make_deformation(AnalyticLoop::from_coeffs(c));
}

namespace {

struct Check {
  std::string id;
  cplx target;
  double tolerance;
  // returns (computed value, residual)
  std::function<std::pair<cplx, double>()> run;
};

Check value_check(std::string id, cplx target, double tol, std::function<cplx()> f) {
  return {std::move(id), target, tol, [f, target] {
            cplx v = f();
            return std::make_pair(v, std::abs(v - target));
          }};
}

// A residual that is itself the quantity under test, with target 0.
Check residual_check(std::string id, double tol, std::function<double()> f) {
  return {std::move(id), 0.0, tol, [f] {
            double r = f();
            return std::make_pair(cplx(r), r);
          }};
}

std::vector<CheckRow> execute(const std::vector<Check>& checks, const SuiteConfig& cfg) {
  std::vector<CheckRow> rows(checks.size());
  parallel_for(static_cast<int>(checks.size()), [&](int i) {
    const Check& c = checks[i];
    CheckRow& r = rows[i];
    r.id = c.id;
    r.target = c.target;
    r.tolerance = cfg.tol > 0 ? cfg.tol : c.tolerance;
    auto start = std::chrono::steady_clock::now();
    try {
      auto [v, res] = c.run();
      r.computed = v;
      r.residual = res;
    } catch (const std::exception& e) {
      r.computed = cplx(std::nan(""), std::nan(""));
      r.residual = kInf;
      r.note = e.what();
    }
    r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    r.pass = r.residual <= r.tolerance;
  });
  return rows;
}

std::string tag(const char* fmt, double a, double b = 0) {
  char buf[80];
  std::snprintf(buf, sizeof buf, fmt, a, b);
  return buf;
}

std::vector<Check> witt_checks() {
  std::vector<Check> cs;
  for (int n = -16; n <= 16; ++n) {
    cs.push_back(residual_check("bracket:n=" + std::to_string(n), 1e-12, [n] {
      double worst = 0;
      for (int m = -16; m <= 16; ++m) {
        VectorField want = n == m ? VectorField() : generator(n + m) * cplx(n - m);
        worst = std::max(worst, coeff_distance(bracket(generator(n), generator(m)).loop(), want.loop()));
      }
      return worst;
    }));
  }
  for (int n = -16; n <= 16; ++n)
    cs.push_back(residual_check("pullback_inversion:n=" + std::to_string(n), 1e-12, [n] {
      AnalyticLoop iota = AnalyticLoop::from_coeffs({{-1, 1.0}});
      return coeff_distance(pullback(iota, generator(n)).loop(), (generator(-n) * -1.0).loop());
    }));
  for (int n = -2; n <= 2; ++n)
    for (double t : {-0.2, 0.2})
      cs.push_back(residual_check(tag("flow:n=%g,t=%g", n, t), 1e-8, [n, t] {
        FlowResult f = flow_ode(TimeField::constant(generator(n)), t, 1000);
        return sup_distance(f.phi.loop(), exact_flow(n, t).loop());
      }));
  for (int n = -8; n <= 8; ++n) {
    cs.push_back(value_check("gf:n=" + std::to_string(n), cplx(0, n * n * n / 12.0), 1e-10,
                             [n] { return gelfand_fuks(generator(n), generator(-n)); }));
    cs.push_back(value_check("omega_rot:n=" + std::to_string(n), cplx(0, n / 12.0), 1e-10,
                             [n] { return omega_rot(generator(n), generator(-n)); }));
  }
  cs.push_back(value_check("rot_functional:l0", cplx(0, 1.0 / 24), 1e-12, [] { return rot_functional(generator(0)); }));
  return cs;
}

std::vector<Check> cocycle_checks(const SuiteConfig& cfg) {
  std::vector<Check> cs;
  GroupCochain2 bt = bott_thurston_cochain(), rc = rcr_cochain(cfg.rot_iters);
  double h = cfg.fd_step;
  for (int n = 1; n <= cfg.nmax; ++n) {
    VectorField a = generator(n), b = generator(-n);
    cs.push_back(value_check("relation_bt:n=" + std::to_string(n), gelfand_fuks(a, b) - omega_rot(a, b), 5e-5,
                             [=] { return van_est(bt, a, b, h).value; }));
    cs.push_back(value_check("relation_rcr:n=" + std::to_string(n), omega_rot(a, b), 1e-3,
                             [=] { return van_est(rc, a, b, h).value; }));
  }
  for (auto [n, m] : {std::pair{1, 2}, {2, 1}, {1, -2}, {3, -1}, {2, 0}})
    cs.push_back(value_check(tag("bt_offdiag:n=%g,m=%g", n, m), 0.0, 5e-5,
                             [=] { return van_est(bt, generator(n), generator(m), h).value; }));
  for (int i = 0; i < cfg.triples; ++i) {
    std::uint64_t s = cfg.seed + 3 * i;
    cs.push_back(value_check("dgrp_bt:triple=" + std::to_string(i), 0.0, 1e-8, [=] {
      return group_differential(bt, random_near_identity(s), random_near_identity(s + 1), random_near_identity(s + 2));
    }));
    cs.push_back(residual_check("associativity:triple=" + std::to_string(i), 1e-9, [=] {
      Deformation a = random_near_identity(s), b = random_near_identity(s + 1), c = random_near_identity(s + 2);
      return sup_distance(compose(compose(a, b), c).loop(), compose(a, compose(b, c)).loop());
    }));
  }
  for (int i = 0; i < std::min(cfg.triples, 5); ++i) {
    std::uint64_t s = cfg.seed + 1000 + 3 * i;
    cs.push_back(value_check("dgrp_dgrp_logcr:triple=" + std::to_string(i), 0.0, 1e-8, [=] {
      return group_differential(coboundary(log_cr_cochain()), random_near_identity(s), random_near_identity(s + 1),
                                random_near_identity(s + 2));
    }));
  }
  for (int n = -8; n <= 8; ++n)
    cs.push_back(value_check("dalg_rot:n=" + std::to_string(n), -omega_rot(generator(n), generator(-n)), 1e-12,
                             [n] { return algebra_differential(rot_cochain(), {generator(n), generator(-n)}); }));
  for (auto [a, b, c] : {std::tuple{1, 2, -3}, {2, -1, -1}, {3, -2, -1}, {0, 2, -2}})
    cs.push_back(value_check("dalg_gf:" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c), 0.0,
                             1e-12, [=] {
                               return algebra_differential(gelfand_fuks_cochain(),
                                                           {generator(a), generator(b), generator(c)});
                             }));
  for (int n = 0; n <= 4; ++n)
    cs.push_back(value_check("rcr_derivative:n=" + std::to_string(n), n == 0 ? -1.0 : 0.0, 1e-6, [=] {
      double hh = 1e-4;
      return (rcr(exact_flow(n, hh), cfg.rot_iters) - rcr(exact_flow(n, -hh), cfg.rot_iters)) / (2 * hh);
    }));
  for (auto [c1, c2, label] : {std::tuple{1, 2, "n"}, {1, 8, "n^3"}})
    cs.push_back(residual_check(std::string("recursion:") + label, 0.0, [=] {
      auto seq = cohomology_recursion(c1, c2, 50);
      int bad = 0;
      for (int n = 1; n <= 50; ++n) {
        Rational want = c2 == 2 ? Rational(n) : Rational(n * n * n);
        if (seq[n - 1] != want) ++bad;
      }
      return static_cast<double>(bad);
    }));
  return cs;
}

std::vector<Check> decompose_checks(const SuiteConfig& cfg) {
  std::vector<Check> cs;
  for (int i = 0; i < 5; ++i) {
    std::uint64_t s = cfg.seed + 500 + i;
    // q = a z + c2 z^2 + c3 z^3, h = e^{i alpha} z exp(eps (e^{i beta} z - e^{-i beta} / z) / 2)
    auto sample = [s] {
      std::mt19937_64 rng(s);
      std::uniform_real_distribution<double> u(-0.1, 0.1), ang(0, 2 * kPi), r(0, 0.1);
      double a = 1 + u(rng);
      std::map<int, cplx> qc{{1, a}, {2, std::polar(r(rng), ang(rng))}, {3, std::polar(r(rng), ang(rng))}};
      AnalyticLoop q = AnalyticLoop::from_coeffs(qc);
      double alpha = ang(rng), beta = ang(rng), eps = 2 * r(rng);
      int m = q.sample_count();
      auto z = roots_of_unity(m);
      std::vector<cplx> phi(m);
      for (int k = 0; k < m; ++k) {
        cplx h = std::polar(1.0, alpha) * z[k] *
                 std::exp(eps / 2 * (std::polar(1.0, beta) * z[k] - std::polar(1.0, -beta) / z[k]));
        phi[k] = q.eval_raw(h);
      }
      return std::make_pair(a, make_deformation(AnalyticLoop::from_samples(phi)));
    };
    cs.push_back(residual_check("decompose:sample=" + std::to_string(i), 1e-8, [=] {
      return decompose(sample().second, cfg.rot_iters).residual;
    }));
    cs.push_back(residual_check("cr:sample=" + std::to_string(i), 1e-8, [=] {
      auto [a, phi] = sample();
      return std::abs(decompose(phi, cfg.rot_iters).cr - 1.0 / a);
    }));
  }
  for (double alpha : {0.3, 1.0, 2.5})
    cs.push_back(value_check(tag("rotation_number:alpha=%g", alpha), alpha, 2 * kPi / cfg.rot_iters + 1e-9,
                             [=] { return cplx(rotation_number(rotation(alpha), cfg.rot_iters)); }));
  cs.push_back(residual_check("omega_rcr_offsets", 1e-10, [=] {
    Deformation a = random_near_identity(cfg.seed + 900), b = random_near_identity(cfg.seed + 901);
    cplx base = omega_rcr(a, b, 0, 0, cfg.rot_iters).value;
    return std::abs(omega_rcr(a, b, 2, -1, cfg.rot_iters).value - base);
  }));
  return cs;
}

std::vector<Check> moduli_checks(const SuiteConfig& cfg) {
  std::vector<Check> cs;
  const double taus[] = {0.05, 0.1, 0.25, 0.5};
  for (double a : taus)
    for (double b : taus)
      cs.push_back(value_check(tag("additivity:tau1=%g,tau2=%g", a, b), a + b, 1e-8,
                               [=] { return cplx(modulus(sew(standard_annulus(a), 2, standard_annulus(b), 1))); }));
  cs.push_back(value_check("boundary_scaling:tau=0.25,s=0.1", 0.35, 1e-8,
                           [] { return cplx(modulus(act_boundary(standard_annulus(0.25), 2, scaling(0.1)))); }));
  cs.push_back(value_check("interior_scaling:tau=0.25,s=0.05", 0.3, 1e-8, [] {
    return cplx(modulus(act_interior(standard_annulus(0.25), std::exp(-2 * kPi * 0.1), scaling(0.05))));
  }));
  double h = cfg.fd_step;
  for (int n = -2; n <= 2; ++n)
    cs.push_back(residual_check("kernel:n=" + std::to_string(n), 1e-6,
                                [=] { return virasoro_kernel_residual(0.25, generator(n), h).residual; }));
  for (int n : {0, 2})
    cs.push_back(residual_check("interior_boundary:n=" + std::to_string(n), 1e-5, [=] {
      return interior_equals_boundary_residual(0.25, std::exp(-kPi * 0.25), generator(n), h).residual;
    }));
  cs.push_back(value_check("control_l0", 1.0 / (2 * kPi), 1e-6,
                           [=] { return cplx(single_boundary_rate(0.25, generator(0), h)); }));
  cs.push_back(residual_check("sew_unravel", 1e-8, [] {
    BSurface s = act_boundary(act_boundary(standard_annulus(0.25), 2, exact_flow(2, 0.01)), 1, exact_flow(-1, 0.02));
    auto [o, i] = unravel(s, std::exp(-2 * kPi * 0.1));
    return normal_form_distance(sew(o, 2, i, 1), s);
  }));
  cs.push_back(residual_check("boundary_actions_commute", 1e-8, [] {
    BSurface s = standard_annulus(0.25);
    Deformation f = exact_flow(1, 0.02), g = exact_flow(-2, 0.01);
    return normal_form_distance(act_boundary(act_boundary(s, 1, f), 2, g), act_boundary(act_boundary(s, 2, g), 1, f));
  }));
  return cs;
}

}  // namespace

SuiteReport run_suite(const std::string& name, const SuiteConfig& config) {
  SuiteReport rep;
  rep.suite = name;
  rep.seed = config.seed;
  std::vector<Check> cs;
  auto add = [&](std::vector<Check> more) { cs.insert(cs.end(), more.begin(), more.end()); };
  if (name == "witt" || name == "all") add(witt_checks());
  if (name == "cocycles" || name == "all") add(cocycle_checks(config));
  if (name == "decompose" || name == "all") add(decompose_checks(config));
  if (name == "moduli" || name == "all") add(moduli_checks(config));
  if (cs.empty()) throw Error(ErrorKind::UnknownSuite, "unknown suite '" + name + "'");
  rep.rows = execute(cs, config);
  return rep;
}

}  // namespace defc
