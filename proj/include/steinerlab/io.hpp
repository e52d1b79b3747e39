#pragma once

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "steinerlab/geom.hpp"

namespace steinerlab {

class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// CompactSet JSON:
//   {"regions": [ring, ...], "holes": [ring, ...], "chains": [polyline, ...]}
// A ring or polyline is a list of [x, y] pairs. Rings are open (the first
// vertex is not repeated). Each hole belongs to the region whose outer ring
// contains it. A one-point polyline is an isolated point.

nlohmann::json to_json(const CompactSet& set);
/// Throws FormatError naming the offending field, e.g. "regions[1][3][0]".
/// The result is validated; GeometryError propagates for invalid geometry.
CompactSet set_from_json(const nlohmann::json& j);

CompactSet load_set(const std::string& path);
void save_set(const CompactSet& set, const std::string& path);

/// One path per ring (holes drawn in white), chains as polylines, isolated
/// points as small circles. The y axis points up.
std::string to_svg(const CompactSet& set);
void save_svg(const CompactSet& set, const std::string& path);

/// Shortest-roundtrip-safe decimal form (%.17g) for CSV output.
std::string format_real(double v);

/// Writes j with two-space indentation and a trailing newline.
void write_json(const nlohmann::json& j, const std::string& path);
nlohmann::json read_json(const std::string& path);
void write_text(const std::string& text, const std::string& path);

}  // namespace steinerlab
