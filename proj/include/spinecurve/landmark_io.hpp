#pragma once

#include <string>
#include <vector>

#include "spinecurve/landmark.hpp"

namespace spinecurve {

/// Parse one landmark case from JSON text. Accepts corner form
/// ({"label", "corners": {"UL": [x,y], ...}}) and direct form
/// ({"label", "upper": {"mid": [x,y], "angle_deg": a}, "lower": ...});
/// source_name is prepended to error messages.
Spine parse_landmark_json(const std::string& text, const std::string& source_name);

/// Parse landmark CSV with header
/// case_id,label,ulx,uly,urx,ury,llx,lly,lrx,lry and one row per
/// vertebra. A file may hold several cases (18 rows each).
std::vector<Spine> parse_landmark_csv(const std::string& text, const std::string& source_name);

/// Serialize a spine back to the JSON schema (corner form when corners
/// are present). Coordinates keep 10 decimal places so a round trip
/// reproduces midpoints and angles to well under 1e-9.
std::string write_landmark_json(const Spine& spine);

Spine load_landmark_file(const std::string& path);

} // namespace spinecurve
