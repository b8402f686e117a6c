#pragma once

#include <string>
#include <string_view>

#include "geovec/features.hpp"

namespace geovec::io {

struct OsmLoadStats {
  std::size_t nodes = 0;
  std::size_t ways = 0;
  std::size_t relations_skipped = 0;
};

// Nodes become Points, closed ways Polygons, open ways LineStrings; ids are
// "node/<id>" / "way/<id>". Only tags whose key is in the filter are kept.
FeatureCollection parse_osm_xml(std::string_view xml, const TagFilter& filter,
                                OsmLoadStats* stats = nullptr);
FeatureCollection load_osm_xml(const std::string& path, const TagFilter& filter,
                               OsmLoadStats* stats = nullptr);

}  // namespace geovec::io
