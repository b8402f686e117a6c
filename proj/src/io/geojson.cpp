#include "geovec/io/geojson.hpp"

#include <cmath>

#include "geovec/error.hpp"
#include "geovec/io/csv.hpp"

namespace geovec::io {

using nlohmann::json;

namespace {

Coordinate position(const json& p) {
  if (!p.is_array() || p.size() < 2 || !p[0].is_number() || !p[1].is_number()) {
    throw Error(ErrorKind::MalformedInput, "invalid GeoJSON position");
  }
  return Coordinate::checked(p[0].get<double>(), p[1].get<double>());
}

std::vector<Coordinate> positions(const json& arr) {
  if (!arr.is_array()) throw Error(ErrorKind::MalformedInput, "expected coordinate array");
  std::vector<Coordinate> out;
  out.reserve(arr.size());
  for (const auto& p : arr) out.push_back(position(p));
  return out;
}

Polygon polygon(const json& rings) {
  if (!rings.is_array() || rings.empty()) {
    throw Error(ErrorKind::MalformedInput, "polygon needs an exterior ring");
  }
  std::vector<LinearRing> holes;
  for (std::size_t i = 1; i < rings.size(); ++i) holes.emplace_back(positions(rings[i]));
  return Polygon(LinearRing(positions(rings[0])), std::move(holes));
}

double round9(double v) {
  const double r = std::round(v * 1e9) / 1e9;
  return r == 0.0 ? 0.0 : r;
}

json position_json(const Coordinate& c) { return json::array({round9(c.lon), round9(c.lat)}); }

json ring_json(const LinearRing& ring) {
  json arr = json::array();
  for (const auto& c : ring.coords()) arr.push_back(position_json(c));
  return arr;
}

json polygon_json(const Polygon& p) {
  json rings = json::array({ring_json(p.exterior())});
  for (const auto& h : p.holes()) rings.push_back(ring_json(h));
  return rings;
}

std::string property_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

}  // namespace

FeatureGeometry geometry_from_json(const json& g) {
  if (!g.is_object() || !g.contains("type") || !g["type"].is_string()) {
    throw Error(ErrorKind::MalformedInput, "feature without a geometry object");
  }
  const std::string type = g["type"].get<std::string>();
  if (!g.contains("coordinates")) {
    throw Error(ErrorKind::MalformedInput, type + " geometry without coordinates");
  }
  const json& c = g["coordinates"];
  try {
    if (type == "Point") return position(c);
    if (type == "LineString") return LineString(positions(c));
    if (type == "Polygon") return polygon(c);
    if (type == "MultiPolygon") {
      if (!c.is_array()) throw Error(ErrorKind::MalformedInput, "invalid MultiPolygon");
      std::vector<Polygon> polys;
      for (const auto& rings : c) polys.push_back(polygon(rings));
      return MultiPolygon(std::move(polys));
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::InvalidGeometry) {
      throw Error(ErrorKind::MalformedInput, "invalid " + type + ": " + e.detail());
    }
    throw;
  }
  throw Error(ErrorKind::MalformedInput, "unsupported geometry type " + type);
}

json geometry_to_json(const FeatureGeometry& g) {
  return std::visit(
      [](const auto& geom) -> json {
        using T = std::decay_t<decltype(geom)>;
        if constexpr (std::is_same_v<T, Coordinate>) {
          return {{"type", "Point"}, {"coordinates", position_json(geom)}};
        } else if constexpr (std::is_same_v<T, LineString>) {
          json arr = json::array();
          for (const auto& c : geom.coords()) arr.push_back(position_json(c));
          return {{"type", "LineString"}, {"coordinates", arr}};
        } else if constexpr (std::is_same_v<T, Polygon>) {
          return {{"type", "Polygon"}, {"coordinates", polygon_json(geom)}};
        } else {
          json arr = json::array();
          for (const auto& p : geom.polygons()) arr.push_back(polygon_json(p));
          return {{"type", "MultiPolygon"}, {"coordinates", arr}};
        }
      },
      g);
}

FeatureCollection parse_geojson(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::MalformedInput, std::string("GeoJSON parse error: ") + e.what());
  }
  if (!doc.is_object() || doc.value("type", "") != "FeatureCollection" ||
      !doc.contains("features") || !doc["features"].is_array()) {
    throw Error(ErrorKind::MalformedInput, "expected a GeoJSON FeatureCollection");
  }
  FeatureCollection fc;
  std::size_t index = 0;
  for (const auto& f : doc["features"]) {
    if (!f.is_object()) throw Error(ErrorKind::MalformedInput, "feature is not an object");
    Feature feature;
    if (f.contains("id") && !f["id"].is_null()) {
      feature.feature_id = property_text(f["id"]);
    } else {
      feature.feature_id = "f" + std::to_string(index);
    }
    if (!f.contains("geometry") || f["geometry"].is_null()) {
      throw Error(ErrorKind::MalformedInput, "feature " + feature.feature_id + " has no geometry");
    }
    feature.geometry = geometry_from_json(f["geometry"]);
    if (f.contains("properties") && f["properties"].is_object()) {
      for (const auto& [key, value] : f["properties"].items()) {
        feature.tags[key] = property_text(value);
      }
    }
    fc.add(std::move(feature));
    ++index;
  }
  return fc;
}

FeatureCollection load_geojson(const std::string& path) { return parse_geojson(read_file(path)); }

std::string to_geojson(const FeatureCollection& fc) {
  json features = json::array();
  for (const auto& f : fc) {
    json props = json::object();
    for (const auto& [k, v] : f.tags) props[k] = v;
    features.push_back({{"type", "Feature"},
                        {"id", f.feature_id},
                        {"properties", props},
                        {"geometry", geometry_to_json(f.geometry)}});
  }
  json doc = {{"type", "FeatureCollection"}, {"features", features}};
  return doc.dump() + "\n";
}

void write_geojson(const FeatureCollection& fc, const std::string& path) {
  write_file(path, to_geojson(fc));
}

MultiPolygon area_from_features(const FeatureCollection& fc) {
  std::vector<AreaGeometry> areas;
  for (const auto& f : fc) {
    if (const auto* p = std::get_if<Polygon>(&f.geometry)) areas.emplace_back(*p);
    if (const auto* mp = std::get_if<MultiPolygon>(&f.geometry)) areas.emplace_back(*mp);
  }
  if (areas.empty()) throw Error(ErrorKind::EmptyArea, "no polygonal geometry in area input");
  return MultiPolygon(flatten(areas));
}

}  // namespace geovec::io
