#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "geovec/features.hpp"

namespace geovec::io {

// Feature ids come from the "id" member, else "f{index}". Non-string
// property values are stored as their JSON text ("12.5", "true").
FeatureCollection parse_geojson(std::string_view text);
FeatureCollection load_geojson(const std::string& path);

// Coordinates are rounded to 9 decimal places.
std::string to_geojson(const FeatureCollection& fc);
void write_geojson(const FeatureCollection& fc, const std::string& path);

FeatureGeometry geometry_from_json(const nlohmann::json& g);
nlohmann::json geometry_to_json(const FeatureGeometry& g);

// Every Polygon/MultiPolygon feature merged into one MultiPolygon.
// Throws EmptyArea when the collection has no polygonal geometry.
MultiPolygon area_from_features(const FeatureCollection& fc);

}  // namespace geovec::io
