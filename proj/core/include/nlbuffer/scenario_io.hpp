#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "nlbuffer/model.hpp"

namespace nlb {

/// Reads and validates a JSON scenario file. ParseError for unreadable or
/// malformed documents, ValidationError (with the key path) for bad values.
Scenario parse_scenario(const std::filesystem::path& path);
Scenario parse_scenario_text(std::string_view text);

/// JSON document that parse_scenario_text maps back to an equal Scenario.
std::string serialize_scenario(const Scenario& s);

}  // namespace nlb
