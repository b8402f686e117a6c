#pragma once

#include <map>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "geovec/geometry.hpp"

namespace geovec {

using Tags = std::map<std::string, std::string>;
using FeatureGeometry = std::variant<Coordinate, LineString, Polygon, MultiPolygon>;

struct Feature {
  std::string feature_id;
  FeatureGeometry geometry;
  Tags tags;

  friend bool operator==(const Feature&, const Feature&) = default;
};

BBox bbox_of(const FeatureGeometry& g);
// Closed-set intersection of any feature geometry with a region polygon.
bool intersects(const FeatureGeometry& g, const Polygon& region);

// Ordered collection with unique, nonempty ids.
class FeatureCollection {
 public:
  FeatureCollection() = default;

  void add(Feature feature);
  std::size_t size() const { return features_.size(); }
  bool empty() const { return features_.empty(); }
  const Feature& operator[](std::size_t i) const { return features_[i]; }
  const std::vector<Feature>& features() const { return features_; }
  auto begin() const { return features_.begin(); }
  auto end() const { return features_.end(); }

  // nullptr when absent.
  const Feature* find(const std::string& id) const;

  friend bool operator==(const FeatureCollection& a, const FeatureCollection& b) {
    return a.features_ == b.features_;
  }

 private:
  std::vector<Feature> features_;
  std::unordered_map<std::string, std::size_t> index_;
};

// key -> accepted values; an empty value list accepts any value.
class TagFilter {
 public:
  explicit TagFilter(std::map<std::string, std::vector<std::string>> entries);

  const std::map<std::string, std::vector<std::string>>& entries() const { return entries_; }
  bool has_key(const std::string& key) const { return entries_.count(key) != 0; }
  bool accepts(const std::string& key, const std::string& value) const;
  bool matches(const Tags& tags) const;

 private:
  std::map<std::string, std::vector<std::string>> entries_;
};

}  // namespace geovec
