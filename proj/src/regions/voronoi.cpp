#include <algorithm>
#include <map>

#include "geovec/error.hpp"
#include "geovec/regions.hpp"

namespace geovec {

namespace {

Coordinate seed_location(const Feature& f) {
  if (const auto* p = std::get_if<Coordinate>(&f.geometry)) return *p;
  return bbox_of(f.geometry).center();
}

}  // namespace

RegionSet regionalize_voronoi(const MultiPolygon& area, const FeatureCollection& seeds) {
  if (seeds.empty()) throw Error(ErrorKind::NoSeeds, "voronoi regionalization needs seeds");
  const LocalPlane frame = LocalPlane::for_area(area);
  const BBox box = area.bbox();

  std::vector<Coordinate> sites;
  std::map<std::pair<double, double>, std::string> seen;
  for (const auto& f : seeds) {
    const Coordinate c = seed_location(f);
    const auto [it, inserted] = seen.emplace(std::make_pair(c.lon, c.lat), f.feature_id);
    if (!inserted) {
      throw Error(ErrorKind::DuplicateSeeds,
                  "seeds " + it->second + " and " + f.feature_id + " share a location");
    }
    sites.push_back(c);
  }

  // Bisector half-planes are built in the frame and mapped back to lon/lat:
  // frame normal (c*dlon, dlat) becomes (c^2*dlon, dlat), c = lon_scale.
  const double c2 = frame.lon_scale() * frame.lon_scale();
  const Polygon bbox_poly(std::vector<Coordinate>{{box.min_lon, box.min_lat},
                                                  {box.max_lon, box.min_lat},
                                                  {box.max_lon, box.max_lat},
                                                  {box.min_lon, box.max_lat}});
  std::vector<Region> regions;
  for (std::size_t i = 0; i < sites.size(); ++i) {
    std::optional<Polygon> cell = bbox_poly;
    for (std::size_t j = 0; j < sites.size() && cell; ++j) {
      if (j == i) continue;
      const Coordinate mid{(sites[i].lon + sites[j].lon) / 2.0,
                           (sites[i].lat + sites[j].lat) / 2.0};
      const Vec2 normal{c2 * (sites[j].lon - sites[i].lon), sites[j].lat - sites[i].lat};
      cell = clip_polygon_halfplane(*cell, mid, normal);
    }
    if (!cell) continue;
    const bool touches_area = std::any_of(area.polygons().begin(), area.polygons().end(),
                                          [&](const Polygon& p) { return polygons_intersect(*cell, p); });
    if (touches_area) regions.push_back({"voronoi_" + seeds[i].feature_id, std::move(*cell)});
  }
  RegionParams params;
  params.seed_count = static_cast<int>(sites.size());
  params.lat_ref = frame.lat_ref();
  return RegionSet(RegionMethod::Voronoi, params, std::move(regions));
}

}  // namespace geovec
