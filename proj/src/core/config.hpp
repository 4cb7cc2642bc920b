#pragma once

#include <string>

#include "json.hpp"

namespace epsnum::cfg {

// Parses the "key = value" run-configuration format into a canonical JSON
// object. Values are JSON literals where they parse as such (numbers,
// arrays, booleans); anything else is kept as a trimmed string. Bare
// comma-separated number lists are accepted for convenience.
nlohmann::json parse_kv_text(const std::string& text);

}  // namespace epsnum::cfg
