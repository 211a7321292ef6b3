#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>

#include "defc/cocycles.hpp"
#include "defc/moduli.hpp"
#include "defc/suites.hpp"

using namespace defc;

namespace {

struct Options {
  int modes = 64;
  int samples = 0;
  double tol = 0;
  double fd_step = 1e-3;
  int rot_iters = 100000;
  std::uint64_t seed = 20261017;
  std::string out;
  std::string format = "json";
};

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text << "\n";
    return;
  }
  std::ofstream f(o.out);
  if (!f) throw Error(ErrorKind::Io, "cannot write " + o.out);
  f << text << "\n";
  if (!f) throw Error(ErrorKind::Io, "write failed for " + o.out);
}

json cjson(cplx c) { return {{"re", c.real()}, {"im", c.imag()}}; }

json decomposition_record(const Deformation& phi, int rot_iters) {
  Decomposition d = decompose(phi, rot_iters);
  cplx r = std::polar(1.0, d.rot) / d.cr;
  return {{"cr", d.cr}, {"rot", d.rot}, {"rcr_re", r.real()}, {"rcr_im", r.imag()}, {"residual", d.residual}};
}

json surface_to_json(const BSurface& s) {
  json j{{"kind", s.kind == SurfaceKind::Disk ? "disk" : "annulus"}, {"phi", deformation_to_json(s.phi)}};
  if (s.kind == SurfaceKind::Annulus) {
    j["tau"] = s.tau;
    j["psi"] = deformation_to_json(s.psi);
  }
  return j;
}

// Binary arguments come as [a, b] or {"left": a, "right": b}.
std::pair<json, json> two_args(const json& j) {
  if (j.is_array() && j.size() == 2) return {j[0], j[1]};
  if (j.is_object() && j.contains("left") && j.contains("right")) return {j["left"], j["right"]};
  throw Error(ErrorKind::Schema, "expected [a, b] or {\"left\": a, \"right\": b}");
}

json eval_op(const std::string& op, const json& args, const Options& o) {
  if (op == "compose") {
    auto [a, b] = two_args(args);
    return deformation_to_json(compose(deformation_from_json(a), deformation_from_json(b)));
  }
  if (op == "invert") return deformation_to_json(invert(deformation_from_json(args)));
  if (op == "composable") {
    auto [a, b] = two_args(args);
    std::string why;
    bool ok = is_composable(deformation_from_json(a), deformation_from_json(b), &why);
    return {{"composable", ok}, {"reason", why}};
  }
  if (op == "winding") return {{"winding", winding_number(loop_from_json(args), 0.0)}};
  if (op == "validate") return deformation_to_json(deformation_from_json(args));
  if (op == "cr") return {{"cr", conformal_radius(deformation_from_json(args))}};
  if (op == "rot") return {{"rot", rotation_number(deformation_from_json(args), o.rot_iters)}};
  if (op == "rcr") return {{"rcr", cjson(rcr(deformation_from_json(args), o.rot_iters))}};
  if (op == "decompose") return decomposition_record(deformation_from_json(args), o.rot_iters);
  if (op == "bracket") {
    auto [a, b] = two_args(args);
    return field_to_json(bracket(field_from_json(a), field_from_json(b)));
  }
  if (op == "bt" || op == "omega-rcr") {
    auto [a, b] = two_args(args);
    Deformation f = deformation_from_json(a), g = deformation_from_json(b);
    return {{op, cjson(op == "bt" ? bott_thurston(f, g) : omega_rcr(f, g, 0, 0, o.rot_iters).value)}};
  }
  if (op == "gf" || op == "omega-rot") {
    auto [a, b] = two_args(args);
    VectorField v = field_from_json(a), w = field_from_json(b);
    return {{op, cjson(op == "gf" ? gelfand_fuks(v, w) : omega_rot(v, w))}};
  }
  if (op == "rot-functional") return {{op, cjson(rot_functional(field_from_json(args)))}};
  throw Error(ErrorKind::Schema, "unknown operation '" + op + "'");
}

BSurface dressed_annulus(double tau, const std::string& phi, const std::string& psi) {
  BSurface s = standard_annulus(tau);
  if (!phi.empty()) s.phi = deformation_from_json(parse_json_argument(phi));
  if (!psi.empty()) s.psi = deformation_from_json(parse_json_argument(psi));
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Complex deformations of the circle: group law, cocycles and annulus moduli"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_help_flag("--help", "print this help");  // -h is taken by the moduli step option
  Options o;
  app.add_option("--modes", o.modes, "truncation degree N")->check(CLI::Range(1, kMaxModes));
  app.add_option("--samples", o.samples, "sample count M (default 4N)");
  app.add_option("--tol", o.tol, "override every check tolerance in verify");
  app.add_option("--fd-step", o.fd_step, "finite-difference step");
  app.add_option("--rot-iters", o.rot_iters, "Birkhoff iterations for rotation numbers");
  app.add_option("--seed", o.seed, "seed for randomized checks");
  app.add_option("--out", o.out, "write output here instead of stdout");
  app.add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  std::string op, args;
  auto* eval = app.add_subcommand("eval", "run one operation on JSON arguments");
  eval->add_option("op", op)->required();
  eval->add_option("args", args)->required();

  std::string phi_arg;
  std::vector<std::string> single{"decompose", "cr", "rot", "rcr"};
  for (auto& name : single) app.add_subcommand(name, name + " of a deformation")->add_option("--phi", phi_arg)->required();

  std::string left, right;
  int off1 = 0, off2 = 0;
  auto* orcr = app.add_subcommand("omega-rcr", "rotation/conformal-radius cocycle");
  orcr->add_option("--left", left)->required();
  orcr->add_option("--right", right)->required();
  orcr->add_option("--offset1", off1, "integer shift of the first lift");
  orcr->add_option("--offset2", off2, "integer shift of the second lift");

  std::string kind;
  auto* cocycle = app.add_subcommand("cocycle", "evaluate a group or algebra cocycle");
  cocycle->add_option("--kind", kind)->required()->check(CLI::IsMember({"bt", "gf", "rot", "rcr"}));
  cocycle->add_option("--left", left)->required();
  cocycle->add_option("--right", right)->required();

  std::string suite;
  int nmax = 4;
  auto* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("suite", suite)->required()->check(CLI::IsMember({"witt", "cocycles", "decompose", "moduli", "all"}));
  verify->add_option("--nmax", nmax, "largest generator index for relation tables");

  std::string action, field = "{\"gen\": 0}", psi_arg;
  double tau = 0.25, tau2 = 0.25, r = 0, h = 1e-3;
  int side = 2;
  auto* moduli = app.add_subcommand("moduli", "annulus operations");
  moduli->add_option("action", action)->required()->check(CLI::IsMember({"sew", "act", "modulus", "virasoro"}));
  moduli->add_option("--tau", tau, "modulus of the (first) annulus");
  moduli->add_option("--tau2", tau2, "modulus of the second annulus for sew");
  moduli->add_option("--r", r, "radius of an interior loop");
  moduli->add_option("--field", field, "vector field JSON");
  moduli->add_option("--h", h, "finite-difference step");
  moduli->add_option("--side", side, "boundary index for act");
  moduli->add_option("--phi", phi_arg, "deformation JSON (boundary 1 dressing, or the acting deformation)");
  moduli->add_option("--psi", psi_arg, "boundary 2 dressing JSON");

  CLI11_PARSE(app, argc, argv);

  try {
    set_default_resolution(o.modes, o.samples);
    CLI::App* sub = app.get_subcommands().front();
    std::string name = sub->get_name();
    if (name == "eval") {
      emit(o, eval_op(op, parse_json_argument(args), o).dump());
    } else if (name == "decompose" || name == "cr" || name == "rot" || name == "rcr") {
      json rec = decomposition_record(deformation_from_json(parse_json_argument(phi_arg)), o.rot_iters);
      emit(o, rec.dump());
    } else if (name == "omega-rcr") {
      OmegaRcr w = omega_rcr(deformation_from_json(parse_json_argument(left)),
                             deformation_from_json(parse_json_argument(right)), off1, off2, o.rot_iters);
      json rec{{"value", cjson(w.value)}, {"log_cr_term", cjson(w.log_cr_term)}, {"t1", w.t1},
               {"t2", w.t2},           {"t12", w.t12},                      {"branch", w.branch}};
      emit(o, rec.dump());
    } else if (name == "cocycle") {
      json a = parse_json_argument(left), b = parse_json_argument(right);
      cplx v;
      if (kind == "bt") v = bott_thurston(deformation_from_json(a), deformation_from_json(b));
      else if (kind == "rcr") v = omega_rcr(deformation_from_json(a), deformation_from_json(b), 0, 0, o.rot_iters).value;
      else if (kind == "gf") v = gelfand_fuks(field_from_json(a), field_from_json(b));
      else v = omega_rot(field_from_json(a), field_from_json(b));
      emit(o, json{{"kind", kind}, {"value", cjson(v)}}.dump());
    } else if (name == "verify") {
      SuiteConfig cfg;
      cfg.nmax = nmax;
      cfg.fd_step = o.fd_step;
      cfg.rot_iters = o.rot_iters;
      cfg.seed = o.seed;
      cfg.tol = o.tol;
      SuiteReport rep = run_suite(suite, cfg);
      emit(o, o.format == "csv" ? rep.to_csv() : rep.to_json().dump(2));
      int failed = 0;
      for (auto& row : rep.rows) failed += !row.pass;
      std::cerr << suite << ": " << rep.rows.size() - failed << "/" << rep.rows.size() << " checks pass\n";
      return rep.all_pass() ? 0 : 1;
    } else if (name == "moduli") {
      if (action == "modulus") {
        emit(o, json{{"tau", modulus(dressed_annulus(tau, phi_arg, psi_arg))}}.dump());
      } else if (action == "sew") {
        BSurface s = sew(dressed_annulus(tau, phi_arg, psi_arg), 2, standard_annulus(tau2), 1);
        emit(o, surface_to_json(s).dump());
      } else if (action == "act") {
        if (phi_arg.empty()) throw Error(ErrorKind::Schema, "act needs --phi");
        Deformation f = deformation_from_json(parse_json_argument(phi_arg));
        BSurface base = standard_annulus(tau);
        BSurface s = r > 0 ? act_interior(base, r, f) : act_boundary(base, side, f);
        emit(o, surface_to_json(s).dump());
      } else {
        VectorField v = field_from_json(parse_json_argument(field));
        std::string csv = "check,value\n";
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", virasoro_kernel_residual(tau, v, h).residual);
        csv += std::string("kernel,") + buf + "\n";
        if (r > 0) {
          std::snprintf(buf, sizeof buf, "%.17g", interior_equals_boundary_residual(tau, r, v, h).residual);
          csv += std::string("interior_equals_boundary,") + buf + "\n";
        }
        std::snprintf(buf, sizeof buf, "%.17g", single_boundary_rate(tau, v, h));
        csv += std::string("boundary2_rate,") + buf;
        emit(o, csv);
      }
    }
  } catch (const Error& e) {
    std::cerr << "error (" << kind_name(e.kind()) << "): " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
