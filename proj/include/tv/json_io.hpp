#pragma once

#include <json.hpp>

#include "tv/scalar.hpp"
#include "tv/statesum.hpp"

namespace tv {

// exact: {"order": m, "coeffs": ["p/q", ...]}; approx: {"re": x, "im": y}
nlohmann::json scalar_to_json(const Scalar &s);
Scalar scalar_from_json(const nlohmann::json &j);

nlohmann::json class_tag_json(const HomotopyClass &c);

} // namespace tv
