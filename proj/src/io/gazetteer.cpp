#include "geovec/io/gazetteer.hpp"

#include <cctype>

#include "geovec/error.hpp"
#include "geovec/io/csv.hpp"
#include "geovec/io/geojson.hpp"

namespace geovec::io {

std::string Gazetteer::normalize(std::string_view name) {
  while (!name.empty() && std::isspace(static_cast<unsigned char>(name.front()))) {
    name.remove_prefix(1);
  }
  while (!name.empty() && std::isspace(static_cast<unsigned char>(name.back()))) {
    name.remove_suffix(1);
  }
  std::string out(name);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

Gazetteer Gazetteer::load(const std::string& path) { return parse(read_file(path)); }

Gazetteer Gazetteer::parse(std::string_view geojson) {
  Gazetteer g;
  for (const auto& f : parse_geojson(geojson)) {
    const auto it = f.tags.find("name");
    if (it == f.tags.end()) {
      throw Error(ErrorKind::MalformedInput, "gazetteer feature " + f.feature_id + " has no name");
    }
    if (const auto* p = std::get_if<Polygon>(&f.geometry)) {
      g.add(it->second, MultiPolygon({*p}));
    } else if (const auto* mp = std::get_if<MultiPolygon>(&f.geometry)) {
      g.add(it->second, *mp);
    } else {
      throw Error(ErrorKind::MalformedInput, "gazetteer entry " + it->second + " is not an area");
    }
  }
  return g;
}

void Gazetteer::add(const std::string& name, MultiPolygon area) {
  const std::string key = normalize(name);
  if (key.empty()) throw Error(ErrorKind::MalformedInput, "empty gazetteer name");
  if (!entries_.emplace(key, std::move(area)).second) {
    throw Error(ErrorKind::MalformedInput, "duplicate gazetteer name " + name);
  }
}

const MultiPolygon& Gazetteer::geocode(std::string_view name) const {
  const auto it = entries_.find(normalize(name));
  if (it == entries_.end()) {
    throw Error(ErrorKind::NotFound, "no gazetteer entry for '" + std::string(name) + "'");
  }
  return it->second;
}

}  // namespace geovec::io
