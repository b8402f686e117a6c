#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "geovec/features.hpp"
#include "geovec/geometry.hpp"

namespace geovec {

enum class RegionMethod { Hex, Slippy, Voronoi };

std::string_view to_string(RegionMethod m);
std::optional<RegionMethod> parse_region_method(std::string_view text);

struct Region {
  std::string region_id;
  Polygon geometry;

  friend bool operator==(const Region&, const Region&) = default;
};

struct RegionParams {
  std::optional<int> resolution;   // hex
  std::optional<int> zoom;         // slippy
  std::optional<int> seed_count;   // voronoi
  std::optional<double> lat_ref;   // hex, voronoi

  friend bool operator==(const RegionParams&, const RegionParams&) = default;
};

// Regions ordered by id; ids unique.
class RegionSet {
 public:
  RegionSet(RegionMethod method, RegionParams params, std::vector<Region> regions);

  RegionMethod method() const { return method_; }
  const RegionParams& params() const { return params_; }
  std::optional<LocalPlane> frame() const;

  std::size_t size() const { return regions_.size(); }
  bool empty() const { return regions_.empty(); }
  const Region& operator[](std::size_t i) const { return regions_[i]; }
  const std::vector<Region>& regions() const { return regions_; }
  auto begin() const { return regions_.begin(); }
  auto end() const { return regions_.end(); }

  std::optional<std::size_t> index_of(const std::string& id) const;
  std::vector<std::string> ids() const;

  friend bool operator==(const RegionSet& a, const RegionSet& b) {
    return a.method_ == b.method_ && a.params_ == b.params_ && a.regions_ == b.regions_;
  }

 private:
  RegionMethod method_;
  RegionParams params_;
  std::vector<Region> regions_;
  std::unordered_map<std::string, std::size_t> index_;
};

// ---- hexagonal grid -------------------------------------------------------

inline constexpr int kMaxHexResolution = 15;

// Axial coordinates of a pointy-top cell.
struct HexCellId {
  int res = 0;
  int q = 0;
  int r = 0;

  std::string render() const;
  static std::optional<HexCellId> parse(std::string_view id);
  int distance(const HexCellId& other) const;

  auto operator<=>(const HexCellId&) const = default;
};

// Center-to-vertex size in frame degrees: 10 * 2^-res.
double hex_cell_size(int res);
HexCellId hex_cell_of(const Coordinate& p, int res, const LocalPlane& frame);
Coordinate hex_cell_center(const HexCellId& cell, const LocalPlane& frame);
Polygon hex_cell_polygon(const HexCellId& cell, const LocalPlane& frame);
RegionSet regionalize_hex(const MultiPolygon& area, int res);

// ---- slippy map tiles ------------------------------------------------------

inline constexpr int kMaxZoom = 22;

struct TileId {
  int z = 0;
  long x = 0;
  long y = 0;

  std::string render() const;
  static std::optional<TileId> parse(std::string_view id);

  auto operator<=>(const TileId&) const = default;
};

TileId tile_of(const Coordinate& p, int z);
BBox tile_bounds(const TileId& t);
Polygon tile_polygon(const TileId& t);
RegionSet regionalize_slippy(const MultiPolygon& area, int z);

// ---- Voronoi ---------------------------------------------------------------

// Point seeds are used as-is, other geometries by their bbox center. Cells
// are clipped from the area bbox in the area's LocalPlane frame.
RegionSet regionalize_voronoi(const MultiPolygon& area, const FeatureCollection& seeds);

// ---- serialization ---------------------------------------------------------

// Features carry {"region_id", "method", "params"} properties.
std::string region_set_to_geojson(const RegionSet& regions);
void write_region_set(const RegionSet& regions, const std::string& path);
RegionSet parse_region_set(std::string_view geojson);
RegionSet load_region_set(const std::string& path);

}  // namespace geovec
