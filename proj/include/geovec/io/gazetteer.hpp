#pragma once

#include <map>
#include <string>
#include <string_view>

#include "geovec/geometry.hpp"

namespace geovec::io {

// Offline name -> area lookup. Names are matched case-insensitively after
// trimming surrounding whitespace.
class Gazetteer {
 public:
  // GeoJSON FeatureCollection with a "name" property on every feature.
  static Gazetteer load(const std::string& path);
  static Gazetteer parse(std::string_view geojson);

  void add(const std::string& name, MultiPolygon area);
  std::size_t size() const { return entries_.size(); }

  // Throws NotFound.
  const MultiPolygon& geocode(std::string_view name) const;

  static std::string normalize(std::string_view name);

 private:
  std::map<std::string, MultiPolygon> entries_;
};

}  // namespace geovec::io
