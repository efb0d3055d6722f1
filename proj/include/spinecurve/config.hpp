#pragma once

#include <string>

#include "spinecurve/diagnosis.hpp"

namespace spinecurve {

/// Tool configuration: every clinical constant is a knob with the
/// standard default, so threshold sensitivity studies need no rebuild.
struct Config {
    DiagnosisConfig diagnosis;
    std::string output_format = "json"; // "json" or "csv"
    bool svg_emit = false;
};

/// Load configuration from a JSON file; unspecified fields keep their
/// defaults. Validates positivity and ordering of the thresholds.
Config load_config(const std::string& path);

/// Validate a fully assembled configuration (also called by load_config).
void validate_config(const Config& cfg);

} // namespace spinecurve
