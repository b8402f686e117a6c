#pragma once

#include <optional>
#include <span>
#include <utility>
#include <variant>
#include <vector>

namespace geovec {

// WGS84 longitude/latitude in degrees.
struct Coordinate {
  double lon = 0.0;
  double lat = 0.0;

  // Validates and normalizes externally supplied values: finite, lat in
  // [-90, 90], lon wrapped into [-180, 180]. Throws InvalidGeometry.
  static Coordinate checked(double lon, double lat);

  friend bool operator==(const Coordinate&, const Coordinate&) = default;
};

// Planar vector in a LocalPlane frame (or a direction in that frame).
struct Vec2 {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Vec2&, const Vec2&) = default;
};

struct BBox {
  double min_lon = 0.0;
  double min_lat = 0.0;
  double max_lon = 0.0;
  double max_lat = 0.0;

  static BBox empty();
  bool is_empty() const { return min_lon > max_lon || min_lat > max_lat; }
  void expand(const Coordinate& c);
  void expand(const BBox& other);
  bool intersects(const BBox& other) const;
  bool contains(const Coordinate& c) const;
  double width() const { return max_lon - min_lon; }
  double height() const { return max_lat - min_lat; }
  Coordinate center() const { return {(min_lon + max_lon) / 2.0, (min_lat + max_lat) / 2.0}; }
};

// Closed ring. Construction closes an open input, drops consecutive
// duplicates and rejects rings with zero signed area.
class LinearRing {
 public:
  explicit LinearRing(std::vector<Coordinate> coords);

  const std::vector<Coordinate>& coords() const { return coords_; }
  // Shoelace area in raw lon/lat units; positive when counter-clockwise.
  double signed_area() const;
  BBox bbox() const;
  LinearRing reversed() const;

  friend bool operator==(const LinearRing&, const LinearRing&) = default;

 private:
  LinearRing() = default;
  std::vector<Coordinate> coords_;
};

// Exterior is stored counter-clockwise, holes clockwise.
class Polygon {
 public:
  explicit Polygon(LinearRing exterior, std::vector<LinearRing> holes = {});
  explicit Polygon(std::vector<Coordinate> exterior) : Polygon(LinearRing(std::move(exterior))) {}

  const LinearRing& exterior() const { return exterior_; }
  const std::vector<LinearRing>& holes() const { return holes_; }
  bool has_holes() const { return !holes_.empty(); }
  BBox bbox() const { return exterior_.bbox(); }

  friend bool operator==(const Polygon&, const Polygon&) = default;

 private:
  LinearRing exterior_;
  std::vector<LinearRing> holes_;
};

class MultiPolygon {
 public:
  explicit MultiPolygon(std::vector<Polygon> polygons);

  const std::vector<Polygon>& polygons() const { return polygons_; }
  BBox bbox() const;

  friend bool operator==(const MultiPolygon&, const MultiPolygon&) = default;

 private:
  std::vector<Polygon> polygons_;
};

class LineString {
 public:
  explicit LineString(std::vector<Coordinate> coords);

  const std::vector<Coordinate>& coords() const { return coords_; }
  BBox bbox() const;

  friend bool operator==(const LineString&, const LineString&) = default;

 private:
  std::vector<Coordinate> coords_;
};

using AreaGeometry = std::variant<Polygon, MultiPolygon>;

// Planar working frame: x = lon * cos(lat_ref), y = lat.
class LocalPlane {
 public:
  explicit LocalPlane(double lat_ref);

  double lat_ref() const { return lat_ref_; }
  double lon_scale() const { return lon_scale_; }
  Vec2 to_frame(const Coordinate& c) const { return {c.lon * lon_scale_, c.lat}; }
  Coordinate from_frame(const Vec2& v) const { return {v.x / lon_scale_, v.y}; }

  // lat_ref taken from the area centroid latitude rounded to 2 decimals.
  static LocalPlane for_area(const MultiPolygon& area);

 private:
  double lat_ref_;
  double lon_scale_;
};

inline constexpr double kOrientationEpsilon = 1e-12;
inline constexpr double kEarthRadiusMeters = 6371008.8;
inline constexpr double kMercatorMaxLat = 85.0511287798066;

// Sign of the turn a -> b -> c: +1 left, -1 right, 0 collinear (|cross| <= eps).
int orientation(const Coordinate& a, const Coordinate& b, const Coordinate& c);

bool segments_intersect(const Coordinate& a1, const Coordinate& a2, const Coordinate& b1,
                        const Coordinate& b2);

// Closed-set containment: boundary points (also of holes) count as inside.
bool point_in_polygon(const Coordinate& p, const Polygon& poly);
bool point_in_ring(const Coordinate& p, const LinearRing& ring);

bool polygons_intersect(const Polygon& a, const Polygon& b);
bool linestring_intersects_polygon(const LineString& line, const Polygon& poly);

// Sutherland-Hodgman clip to {x : (x - line_point) . normal <= 0}. Holes are
// ignored. Returns nullopt when nothing with positive area remains.
std::optional<Polygon> clip_polygon_halfplane(const Polygon& poly, const Coordinate& line_point,
                                              const Vec2& normal);

double planar_area(const Polygon& poly, const LocalPlane& frame);
double planar_area(const MultiPolygon& poly, const LocalPlane& frame);

// Web Mercator unit square; latitude clamped to +-kMercatorMaxLat.
Vec2 mercator_normalize(const Coordinate& p);
Coordinate mercator_denormalize(const Vec2& xy);

double haversine_distance(const Coordinate& a, const Coordinate& b);

std::vector<Polygon> flatten(std::span<const AreaGeometry> geoms);

// Area-weighted centroid in lon/lat; falls back to the bbox center for
// degenerate input.
Coordinate area_centroid(const MultiPolygon& area);

}  // namespace geovec
