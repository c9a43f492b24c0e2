#pragma once

#include <qarrival/sweep.hpp>

#include <json.hpp>

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>

namespace qarrival::io {

struct McSettings {
  std::size_t count = 1000000;
  std::uint64_t seed = 20240229;

  bool operator==(const McSettings&) const = default;
};

/// Everything a `sweep` run needs, parsed from a JSON file.
struct RunConfig {
  sweep::SweepSpec sweep;
  McSettings mc;
  std::string output; ///< CSV path; empty means stdout

  bool operator==(const RunConfig&) const = default;
};

/// Parses and validates. Unknown keys anywhere are rejected. Masses may be
/// given as "mass_amu" or "mass_g" (exactly one). Throws ValidationError.
RunConfig parse_config(const nlohmann::json& doc);

/// Reads a file; a missing or unparsable file is a ValidationError.
RunConfig load_config(const std::filesystem::path& path);

/// Fully resolved form (defaults filled, mass in grams) that parse_config
/// maps back to an identical RunConfig.
nlohmann::json to_json(const RunConfig& cfg);

} // namespace qarrival::io
