#include <algorithm>

#include <json.hpp>

#include "geovec/error.hpp"
#include "geovec/io/csv.hpp"
#include "geovec/io/geojson.hpp"
#include "geovec/regions.hpp"

namespace geovec {

using nlohmann::json;

std::string_view to_string(RegionMethod m) {
  switch (m) {
    case RegionMethod::Hex: return "hex";
    case RegionMethod::Slippy: return "slippy";
    case RegionMethod::Voronoi: return "voronoi";
  }
  return "unknown";
}

std::optional<RegionMethod> parse_region_method(std::string_view text) {
  if (text == "hex") return RegionMethod::Hex;
  if (text == "slippy") return RegionMethod::Slippy;
  if (text == "voronoi") return RegionMethod::Voronoi;
  return std::nullopt;
}

RegionSet::RegionSet(RegionMethod method, RegionParams params, std::vector<Region> regions)
    : method_(method), params_(std::move(params)), regions_(std::move(regions)) {
  std::sort(regions_.begin(), regions_.end(),
            [](const Region& a, const Region& b) { return a.region_id < b.region_id; });
  for (std::size_t i = 0; i < regions_.size(); ++i) {
    if (regions_[i].region_id.empty()) throw Error(ErrorKind::MalformedInput, "empty region id");
    if (!index_.emplace(regions_[i].region_id, i).second) {
      throw Error(ErrorKind::MalformedInput, "duplicate region id " + regions_[i].region_id);
    }
  }
}

std::optional<LocalPlane> RegionSet::frame() const {
  if (!params_.lat_ref) return std::nullopt;
  return LocalPlane(*params_.lat_ref);
}

std::optional<std::size_t> RegionSet::index_of(const std::string& id) const {
  const auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> RegionSet::ids() const {
  std::vector<std::string> out;
  out.reserve(regions_.size());
  for (const auto& r : regions_) out.push_back(r.region_id);
  return out;
}

namespace {

json params_json(const RegionParams& p) {
  json j = json::object();
  if (p.resolution) j["resolution"] = *p.resolution;
  if (p.zoom) j["zoom"] = *p.zoom;
  if (p.seed_count) j["seed_count"] = *p.seed_count;
  if (p.lat_ref) j["lat_ref"] = *p.lat_ref;
  return j;
}

RegionParams params_from_json(const json& j) {
  RegionParams p;
  if (!j.is_object()) throw Error(ErrorKind::MalformedInput, "region params must be an object");
  try {
    if (j.contains("resolution")) p.resolution = j["resolution"].get<int>();
    if (j.contains("zoom")) p.zoom = j["zoom"].get<int>();
    if (j.contains("seed_count")) p.seed_count = j["seed_count"].get<int>();
    if (j.contains("lat_ref")) p.lat_ref = j["lat_ref"].get<double>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::MalformedInput, std::string("bad region params: ") + e.what());
  }
  return p;
}

}  // namespace

std::string region_set_to_geojson(const RegionSet& regions) {
  const json params = params_json(regions.params());
  const std::string method(to_string(regions.method()));
  json features = json::array();
  for (const auto& r : regions) {
    features.push_back({{"type", "Feature"},
                        {"id", r.region_id},
                        {"properties", {{"region_id", r.region_id}, {"method", method}, {"params", params}}},
                        {"geometry", io::geometry_to_json(r.geometry)}});
  }
  return json{{"type", "FeatureCollection"}, {"features", features}}.dump() + "\n";
}

void write_region_set(const RegionSet& regions, const std::string& path) {
  io::write_file(path, region_set_to_geojson(regions));
}

RegionSet parse_region_set(std::string_view geojson) {
  const FeatureCollection fc = io::parse_geojson(geojson);
  std::optional<RegionMethod> method;
  RegionParams params;
  std::vector<Region> regions;
  for (const auto& f : fc) {
    const auto m = f.tags.find("method");
    if (m == f.tags.end()) throw Error(ErrorKind::MalformedInput, "region without method");
    const auto parsed = parse_region_method(m->second);
    if (!parsed) throw Error(ErrorKind::MalformedInput, "unknown region method " + m->second);
    if (method && *method != *parsed) {
      throw Error(ErrorKind::MalformedInput, "mixed region methods in one file");
    }
    method = parsed;
    if (const auto p = f.tags.find("params"); p != f.tags.end()) {
      json j;
      try {
        j = json::parse(p->second);
      } catch (const json::exception&) {
        throw Error(ErrorKind::MalformedInput, "unparseable region params");
      }
      params = params_from_json(j);
    }
    const auto* poly = std::get_if<Polygon>(&f.geometry);
    if (poly == nullptr) {
      throw Error(ErrorKind::MalformedInput, "region " + f.feature_id + " is not a Polygon");
    }
    const auto rid = f.tags.find("region_id");
    regions.push_back({rid != f.tags.end() ? rid->second : f.feature_id, *poly});
  }
  return RegionSet(method.value_or(RegionMethod::Hex), params, std::move(regions));
}

RegionSet load_region_set(const std::string& path) { return parse_region_set(io::read_file(path)); }

}  // namespace geovec
