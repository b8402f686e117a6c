#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "geovec/error.hpp"
#include "geovec/regions.hpp"

namespace geovec {

namespace {

constexpr long kMaxTiles = 4'000'000;

void check_zoom(int z) {
  if (z < 0 || z > kMaxZoom) {
    throw Error(ErrorKind::InvalidZoom, "zoom must be in [0, 22], got " + std::to_string(z));
  }
}

std::optional<long> parse_long(std::string_view text) {
  if (text.empty()) return std::nullopt;
  std::string buf(text);
  char* end = nullptr;
  const long v = std::strtol(buf.c_str(), &end, 10);
  if (end != buf.c_str() + buf.size() || std::to_string(v) != buf) return std::nullopt;
  return v;
}

}  // namespace

std::string TileId::render() const {
  return "tile_" + std::to_string(z) + "_" + std::to_string(x) + "_" + std::to_string(y);
}

std::optional<TileId> TileId::parse(std::string_view id) {
  if (id.substr(0, 5) != "tile_") return std::nullopt;
  id.remove_prefix(5);
  const auto a = id.find('_');
  if (a == std::string_view::npos) return std::nullopt;
  const auto b = id.find('_', a + 1);
  if (b == std::string_view::npos) return std::nullopt;
  const auto z = parse_long(id.substr(0, a));
  const auto x = parse_long(id.substr(a + 1, b - a - 1));
  const auto y = parse_long(id.substr(b + 1));
  if (!z || !x || !y || *z < 0 || *z > kMaxZoom) return std::nullopt;
  const long n = 1L << *z;
  if (*x < 0 || *x >= n || *y < 0 || *y >= n) return std::nullopt;
  return TileId{static_cast<int>(*z), *x, *y};
}

TileId tile_of(const Coordinate& p, int z) {
  check_zoom(z);
  const double n = std::ldexp(1.0, z);
  const Vec2 m = mercator_normalize(p);
  const long max_index = (1L << z) - 1;
  const auto cell = [&](double v) {
    return std::clamp(static_cast<long>(std::floor(n * v)), 0L, max_index);
  };
  return {z, cell(m.x), cell(m.y)};
}

BBox tile_bounds(const TileId& t) {
  check_zoom(t.z);
  const double n = std::ldexp(1.0, t.z);
  const Coordinate nw = mercator_denormalize({t.x / n, t.y / n});
  const Coordinate se = mercator_denormalize({(t.x + 1) / n, (t.y + 1) / n});
  return {nw.lon, se.lat, se.lon, nw.lat};
}

Polygon tile_polygon(const TileId& t) {
  const BBox b = tile_bounds(t);
  return Polygon(std::vector<Coordinate>{{b.min_lon, b.min_lat},
                                         {b.max_lon, b.min_lat},
                                         {b.max_lon, b.max_lat},
                                         {b.min_lon, b.max_lat},
                                         {b.min_lon, b.min_lat}});
}

RegionSet regionalize_slippy(const MultiPolygon& area, int z) {
  check_zoom(z);
  const BBox box = area.bbox();
  const TileId nw = tile_of({box.min_lon, box.max_lat}, z);
  const TileId se = tile_of({box.max_lon, box.min_lat}, z);
  if ((se.x - nw.x + 1) * (se.y - nw.y + 1) > kMaxTiles) {
    throw Error(ErrorKind::TooManyRegions, "area too large for zoom " + std::to_string(z));
  }
  std::vector<Region> regions;
  for (long x = nw.x; x <= se.x; ++x) {
    for (long y = nw.y; y <= se.y; ++y) {
      const TileId t{z, x, y};
      Polygon poly = tile_polygon(t);
      for (const auto& part : area.polygons()) {
        if (polygons_intersect(poly, part)) {
          regions.push_back({t.render(), std::move(poly)});
          break;
        }
      }
    }
  }
  RegionParams params;
  params.zoom = z;
  return RegionSet(RegionMethod::Slippy, params, std::move(regions));
}

}  // namespace geovec
