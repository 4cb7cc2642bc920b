#include "config.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "errors.hpp"

namespace epsnum::cfg {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

bool looks_like_number_list(const std::string& v) {
  if (v.find(',') == std::string::npos) return false;
  for (char c : v)
    if (!(std::isdigit(static_cast<unsigned char>(c)) || c == ',' || c == '.' || c == '-' ||
          c == '+' || c == 'e' || c == 'E' || std::isspace(static_cast<unsigned char>(c))))
      return false;
  return true;
}

}  // namespace

nlohmann::json parse_kv_text(const std::string& text) {
  nlohmann::json out = nlohmann::json::object();
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      fail(ErrorCode::Config,
           "config line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(stripped.substr(0, eq));
    std::string value = trim(stripped.substr(eq + 1));
    if (key.empty())
      fail(ErrorCode::Config, "config line " + std::to_string(lineno) + ": empty key");
    if (looks_like_number_list(value)) value = "[" + value + "]";
    nlohmann::json parsed = nlohmann::json::parse(value, nullptr, false);
    if (parsed.is_discarded())
      out[key] = value;  // plain string (e.g. real, inf, exact)
    else
      out[key] = parsed;
  }
  return out;
}

}  // namespace epsnum::cfg
