#include "geovec/features.hpp"

#include <algorithm>
#include <set>

#include "geovec/error.hpp"

namespace geovec {

BBox bbox_of(const FeatureGeometry& g) {
  return std::visit(
      [](const auto& geom) -> BBox {
        using T = std::decay_t<decltype(geom)>;
        if constexpr (std::is_same_v<T, Coordinate>) {
          return {geom.lon, geom.lat, geom.lon, geom.lat};
        } else {
          return geom.bbox();
        }
      },
      g);
}

bool intersects(const FeatureGeometry& g, const Polygon& region) {
  return std::visit(
      [&](const auto& geom) -> bool {
        using T = std::decay_t<decltype(geom)>;
        if constexpr (std::is_same_v<T, Coordinate>) {
          return point_in_polygon(geom, region);
        } else if constexpr (std::is_same_v<T, LineString>) {
          return linestring_intersects_polygon(geom, region);
        } else if constexpr (std::is_same_v<T, Polygon>) {
          return polygons_intersect(geom, region);
        } else {
          return std::any_of(geom.polygons().begin(), geom.polygons().end(),
                             [&](const Polygon& p) { return polygons_intersect(p, region); });
        }
      },
      g);
}

void FeatureCollection::add(Feature feature) {
  if (feature.feature_id.empty()) throw Error(ErrorKind::MalformedInput, "empty feature id");
  const auto [it, inserted] = index_.emplace(feature.feature_id, features_.size());
  if (!inserted) {
    throw Error(ErrorKind::MalformedInput, "duplicate feature id: " + feature.feature_id);
  }
  features_.push_back(std::move(feature));
}

const Feature* FeatureCollection::find(const std::string& id) const {
  const auto it = index_.find(id);
  return it == index_.end() ? nullptr : &features_[it->second];
}

TagFilter::TagFilter(std::map<std::string, std::vector<std::string>> entries)
    : entries_(std::move(entries)) {
  if (entries_.empty()) throw Error(ErrorKind::MalformedInput, "tag filter has no keys");
  for (const auto& [key, values] : entries_) {
    if (key.empty()) throw Error(ErrorKind::MalformedInput, "tag filter has an empty key");
    const std::set<std::string> unique(values.begin(), values.end());
    if (unique.size() != values.size()) {
      throw Error(ErrorKind::MalformedInput, "duplicate values for filter key " + key);
    }
  }
}

bool TagFilter::accepts(const std::string& key, const std::string& value) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return false;
  return it->second.empty() ||
         std::find(it->second.begin(), it->second.end(), value) != it->second.end();
}

bool TagFilter::matches(const Tags& tags) const {
  return std::any_of(tags.begin(), tags.end(),
                     [&](const auto& kv) { return accepts(kv.first, kv.second); });
}

}  // namespace geovec
