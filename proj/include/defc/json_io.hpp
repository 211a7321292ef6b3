#pragma once

#include <json.hpp>

#include "defc/deformation.hpp"
#include "defc/witt.hpp"

namespace defc {

using json = nlohmann::json;

// {"coeffs": [[n, re, im], ...]}, or the shorthands
// {"primitive": "rot", "alpha": a} and {"primitive": "scale", "tau": t}.
AnalyticLoop loop_from_json(const json& j, int modes = 0);
json loop_to_json(const AnalyticLoop& l);

Deformation deformation_from_json(const json& j, int modes = 0);
json deformation_to_json(const Deformation& d);  // adds "validated": true

// Coefficient encoding, {"gen": n} for l_n or {"gen_i": n} for i l_n.
VectorField field_from_json(const json& j, int modes = 0);
json field_to_json(const VectorField& v);

json parse_json_argument(const std::string& text);  // throws Schema on bad syntax

}  // namespace defc
