#include "defc/json_io.hpp"

#include <cmath>

namespace defc {

namespace {

[[noreturn]] void schema(const std::string& what) { throw Error(ErrorKind::Schema, what); }

}  // namespace

AnalyticLoop loop_from_json(const json& j, int modes) {
  if (!j.is_object()) schema("loop must be a JSON object");
  if (j.contains("primitive")) {
    std::string p = j["primitive"].is_string() ? j["primitive"].get<std::string>() : "";
    if (p == "rot") {
      if (!j.contains("alpha") || !j["alpha"].is_number()) schema("rot needs a numeric alpha");
      return AnalyticLoop::from_coeffs({{1, std::polar(1.0, j["alpha"].get<double>())}}, modes);
    }
    if (p == "scale") {
      if (!j.contains("tau") || !j["tau"].is_number()) schema("scale needs a numeric tau");
      return AnalyticLoop::from_coeffs({{1, std::exp(-2 * kPi * j["tau"].get<double>())}}, modes);
    }
    if (p == "id") return AnalyticLoop::identity(modes);
    schema("unknown primitive '" + p + "'");
  }
  if (!j.contains("coeffs") || !j["coeffs"].is_array()) schema("loop needs a coeffs array");
  std::map<int, cplx> c;
  for (auto& e : j["coeffs"]) {
    if (!e.is_array() || e.size() != 3 || !e[0].is_number_integer() || !e[1].is_number() || !e[2].is_number())
      schema("coefficient entries are [n, re, im] with integer n");
    c[e[0].get<int>()] += cplx(e[1].get<double>(), e[2].get<double>());
  }
  return AnalyticLoop::from_coeffs(c, modes);
}

json loop_to_json(const AnalyticLoop& l) {
  json arr = json::array();
  for (auto& [n, c] : l.coeff_map()) arr.push_back({n, c.real(), c.imag()});
  return {{"coeffs", arr}};
}

Deformation deformation_from_json(const json& j, int modes) { return make_deformation(loop_from_json(j, modes)); }

json deformation_to_json(const Deformation& d) {
  json j = loop_to_json(d.loop());
  j["validated"] = true;
  return j;
}

VectorField field_from_json(const json& j, int modes) {
  if (j.is_object() && j.contains("gen")) {
    if (!j["gen"].is_number_integer()) schema("gen must be an integer");
    return generator(j["gen"].get<int>(), modes);
  }
  if (j.is_object() && j.contains("gen_i")) {
    if (!j["gen_i"].is_number_integer()) schema("gen_i must be an integer");
    return generator_i(j["gen_i"].get<int>(), modes);
  }
  return VectorField(loop_from_json(j, modes));
}

json field_to_json(const VectorField& v) { return loop_to_json(v.loop()); }

json parse_json_argument(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    schema(std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace defc
