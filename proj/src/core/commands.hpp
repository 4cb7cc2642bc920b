#pragma once

#include <string>

#include "json.hpp"

namespace epsnum::cmd {

// payload: deterministic result object (byte-identical for identical
// config + seed). metrics: wall-clock data, kept outside the payload.
struct CommandResult {
  nlohmann::json payload;
  nlohmann::json metrics;
};

CommandResult run_command(const std::string& command, const nlohmann::json& config);

const char* version();

}  // namespace epsnum::cmd
