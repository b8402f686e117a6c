#include "geovec/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "geovec/error.hpp"

namespace geovec {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

double cross(const Coordinate& a, const Coordinate& b, const Coordinate& c) {
  return (b.lon - a.lon) * (c.lat - a.lat) - (b.lat - a.lat) * (c.lon - a.lon);
}

bool within_segment_box(const Coordinate& a, const Coordinate& b, const Coordinate& p) {
  return p.lon >= std::min(a.lon, b.lon) && p.lon <= std::max(a.lon, b.lon) &&
         p.lat >= std::min(a.lat, b.lat) && p.lat <= std::max(a.lat, b.lat);
}

bool point_on_segment(const Coordinate& p, const Coordinate& a, const Coordinate& b) {
  return orientation(a, b, p) == 0 && within_segment_box(a, b, p);
}

double ring_shoelace(const std::vector<Coordinate>& coords) {
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < coords.size(); ++i) {
    sum += coords[i].lon * coords[i + 1].lat - coords[i + 1].lon * coords[i].lat;
  }
  return sum / 2.0;
}

bool ring_on_boundary(const Coordinate& p, const LinearRing& ring) {
  const auto& c = ring.coords();
  for (std::size_t i = 0; i + 1 < c.size(); ++i) {
    if (point_on_segment(p, c[i], c[i + 1])) return true;
  }
  return false;
}

// Even-odd ray cast towards +lon. Boundary handled by the caller.
bool ring_crossing_parity(const Coordinate& p, const LinearRing& ring) {
  const auto& c = ring.coords();
  bool inside = false;
  for (std::size_t i = 0, j = c.size() - 2; i + 1 < c.size(); j = i++) {
    const Coordinate& a = c[i];
    const Coordinate& b = c[j];
    if ((a.lat > p.lat) != (b.lat > p.lat)) {
      const double x = (b.lon - a.lon) * (p.lat - a.lat) / (b.lat - a.lat) + a.lon;
      if (p.lon < x) inside = !inside;
    }
  }
  return inside;
}

bool rings_edges_intersect(const LinearRing& a, const LinearRing& b) {
  const auto& ca = a.coords();
  const auto& cb = b.coords();
  for (std::size_t i = 0; i + 1 < ca.size(); ++i) {
    BBox ea = BBox::empty();
    ea.expand(ca[i]);
    ea.expand(ca[i + 1]);
    for (std::size_t j = 0; j + 1 < cb.size(); ++j) {
      BBox eb = BBox::empty();
      eb.expand(cb[j]);
      eb.expand(cb[j + 1]);
      if (!ea.intersects(eb)) continue;
      if (segments_intersect(ca[i], ca[i + 1], cb[j], cb[j + 1])) return true;
    }
  }
  return false;
}

template <typename F>
void for_each_ring(const Polygon& p, F&& f) {
  f(p.exterior());
  for (const auto& h : p.holes()) f(h);
}

}  // namespace

Coordinate Coordinate::checked(double lon, double lat) {
  if (!std::isfinite(lon) || !std::isfinite(lat)) {
    throw Error(ErrorKind::InvalidGeometry, "non-finite coordinate");
  }
  if (lat < -90.0 || lat > 90.0) {
    throw Error(ErrorKind::InvalidGeometry, "latitude out of range: " + std::to_string(lat));
  }
  // 180 is kept as the closed east edge; only values beyond it wrap.
  if (lon < -180.0 || lon > 180.0) {
    lon = std::fmod(lon + 180.0, 360.0);
    if (lon < 0.0) lon += 360.0;
    lon -= 180.0;
  }
  return {lon, lat};
}

BBox BBox::empty() {
  const double inf = std::numeric_limits<double>::infinity();
  return {inf, inf, -inf, -inf};
}

void BBox::expand(const Coordinate& c) {
  min_lon = std::min(min_lon, c.lon);
  min_lat = std::min(min_lat, c.lat);
  max_lon = std::max(max_lon, c.lon);
  max_lat = std::max(max_lat, c.lat);
}

void BBox::expand(const BBox& o) {
  min_lon = std::min(min_lon, o.min_lon);
  min_lat = std::min(min_lat, o.min_lat);
  max_lon = std::max(max_lon, o.max_lon);
  max_lat = std::max(max_lat, o.max_lat);
}

bool BBox::intersects(const BBox& o) const {
  return !(o.min_lon > max_lon || o.max_lon < min_lon || o.min_lat > max_lat ||
           o.max_lat < min_lat);
}

bool BBox::contains(const Coordinate& c) const {
  return c.lon >= min_lon && c.lon <= max_lon && c.lat >= min_lat && c.lat <= max_lat;
}

LinearRing::LinearRing(std::vector<Coordinate> coords) {
  for (const auto& c : coords) {
    if (!std::isfinite(c.lon) || !std::isfinite(c.lat)) {
      throw Error(ErrorKind::InvalidGeometry, "non-finite ring coordinate");
    }
    if (coords_.empty() || !(coords_.back() == c)) coords_.push_back(c);
  }
  if (!coords_.empty() && !(coords_.front() == coords_.back())) coords_.push_back(coords_.front());
  if (coords_.size() < 4) {
    throw Error(ErrorKind::InvalidGeometry, "ring needs at least 3 distinct vertices");
  }
  if (signed_area() == 0.0) throw Error(ErrorKind::InvalidGeometry, "ring has zero area");
}

double LinearRing::signed_area() const { return ring_shoelace(coords_); }

BBox LinearRing::bbox() const {
  BBox box = BBox::empty();
  for (const auto& c : coords_) box.expand(c);
  return box;
}

LinearRing LinearRing::reversed() const {
  LinearRing out;
  out.coords_.assign(coords_.rbegin(), coords_.rend());
  return out;
}

Polygon::Polygon(LinearRing exterior, std::vector<LinearRing> holes)
    : exterior_(exterior.signed_area() > 0.0 ? std::move(exterior) : exterior.reversed()) {
  holes_.reserve(holes.size());
  for (auto& h : holes) holes_.push_back(h.signed_area() < 0.0 ? std::move(h) : h.reversed());
}

MultiPolygon::MultiPolygon(std::vector<Polygon> polygons) : polygons_(std::move(polygons)) {
  if (polygons_.empty()) throw Error(ErrorKind::InvalidGeometry, "empty multipolygon");
}

BBox MultiPolygon::bbox() const {
  BBox box = BBox::empty();
  for (const auto& p : polygons_) box.expand(p.bbox());
  return box;
}

LineString::LineString(std::vector<Coordinate> coords) : coords_(std::move(coords)) {
  if (coords_.size() < 2) throw Error(ErrorKind::InvalidGeometry, "linestring needs 2 points");
  for (const auto& c : coords_) {
    if (!std::isfinite(c.lon) || !std::isfinite(c.lat)) {
      throw Error(ErrorKind::InvalidGeometry, "non-finite linestring coordinate");
    }
  }
}

BBox LineString::bbox() const {
  BBox box = BBox::empty();
  for (const auto& c : coords_) box.expand(c);
  return box;
}

LocalPlane::LocalPlane(double lat_ref) : lat_ref_(lat_ref) {
  if (!(std::abs(lat_ref) < 89.0)) {
    throw Error(ErrorKind::InvalidGeometry, "frame reference latitude must satisfy |lat| < 89");
  }
  lon_scale_ = std::cos(lat_ref * kDegToRad);
}

LocalPlane LocalPlane::for_area(const MultiPolygon& area) {
  const double lat = area_centroid(area).lat;
  return LocalPlane(std::round(lat * 100.0) / 100.0);
}

int orientation(const Coordinate& a, const Coordinate& b, const Coordinate& c) {
  const double v = cross(a, b, c);
  if (std::abs(v) <= kOrientationEpsilon) return 0;
  return v > 0.0 ? 1 : -1;
}

bool segments_intersect(const Coordinate& a1, const Coordinate& a2, const Coordinate& b1,
                        const Coordinate& b2) {
  const int o1 = orientation(a1, a2, b1);
  const int o2 = orientation(a1, a2, b2);
  const int o3 = orientation(b1, b2, a1);
  const int o4 = orientation(b1, b2, a2);
  if (o1 != o2 && o3 != o4 && o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0) return true;
  if (o1 == 0 && within_segment_box(a1, a2, b1)) return true;
  if (o2 == 0 && within_segment_box(a1, a2, b2)) return true;
  if (o3 == 0 && within_segment_box(b1, b2, a1)) return true;
  if (o4 == 0 && within_segment_box(b1, b2, a2)) return true;
  return false;
}

bool point_in_ring(const Coordinate& p, const LinearRing& ring) {
  return ring_on_boundary(p, ring) || ring_crossing_parity(p, ring);
}

bool point_in_polygon(const Coordinate& p, const Polygon& poly) {
  if (!poly.bbox().contains(p)) return false;
  if (ring_on_boundary(p, poly.exterior())) return true;
  if (!ring_crossing_parity(p, poly.exterior())) return false;
  for (const auto& hole : poly.holes()) {
    if (ring_on_boundary(p, hole)) return true;
    if (ring_crossing_parity(p, hole)) return false;
  }
  return true;
}

bool polygons_intersect(const Polygon& a, const Polygon& b) {
  if (!a.bbox().intersects(b.bbox())) return false;
  bool edge_hit = false;
  for_each_ring(a, [&](const LinearRing& ra) {
    if (edge_hit) return;
    for_each_ring(b, [&](const LinearRing& rb) {
      if (!edge_hit && rings_edges_intersect(ra, rb)) edge_hit = true;
    });
  });
  if (edge_hit) return true;
  return point_in_polygon(a.exterior().coords().front(), b) ||
         point_in_polygon(b.exterior().coords().front(), a);
}

bool linestring_intersects_polygon(const LineString& line, const Polygon& poly) {
  if (!line.bbox().intersects(poly.bbox())) return false;
  const auto& lc = line.coords();
  bool hit = false;
  for_each_ring(poly, [&](const LinearRing& ring) {
    const auto& rc = ring.coords();
    for (std::size_t i = 0; !hit && i + 1 < lc.size(); ++i) {
      for (std::size_t j = 0; j + 1 < rc.size(); ++j) {
        if (segments_intersect(lc[i], lc[i + 1], rc[j], rc[j + 1])) {
          hit = true;
          break;
        }
      }
    }
  });
  if (hit) return true;
  // No boundary contact: the whole line lies on one side.
  return point_in_polygon(lc.front(), poly);
}

std::optional<Polygon> clip_polygon_halfplane(const Polygon& poly, const Coordinate& line_point,
                                              const Vec2& normal) {
  const auto side = [&](const Coordinate& c) {
    return (c.lon - line_point.lon) * normal.x + (c.lat - line_point.lat) * normal.y;
  };
  const auto& in = poly.exterior().coords();
  std::vector<Coordinate> out;
  out.reserve(in.size() + 2);
  for (std::size_t i = 0; i + 1 < in.size(); ++i) {
    const Coordinate& cur = in[i];
    const Coordinate& nxt = in[i + 1];
    const double dc = side(cur);
    const double dn = side(nxt);
    const bool cur_in = dc <= 0.0;
    const bool nxt_in = dn <= 0.0;
    if (cur_in) out.push_back(cur);
    if (cur_in != nxt_in && dc != 0.0 && dn != 0.0) {
      const double t = dc / (dc - dn);
      out.push_back({cur.lon + t * (nxt.lon - cur.lon), cur.lat + t * (nxt.lat - cur.lat)});
    }
  }
  std::vector<Coordinate> dedup;
  for (const auto& c : out) {
    if (dedup.empty() || !(dedup.back() == c)) dedup.push_back(c);
  }
  while (dedup.size() > 1 && dedup.front() == dedup.back()) dedup.pop_back();
  if (dedup.size() < 3) return std::nullopt;
  dedup.push_back(dedup.front());
  if (ring_shoelace(dedup) == 0.0) return std::nullopt;
  return Polygon(LinearRing(std::move(dedup)));
}

double planar_area(const Polygon& poly, const LocalPlane& frame) {
  double area = std::abs(poly.exterior().signed_area());
  for (const auto& h : poly.holes()) area -= std::abs(h.signed_area());
  return std::max(0.0, area * frame.lon_scale());
}

double planar_area(const MultiPolygon& poly, const LocalPlane& frame) {
  double total = 0.0;
  for (const auto& p : poly.polygons()) total += planar_area(p, frame);
  return total;
}

Vec2 mercator_normalize(const Coordinate& p) {
  const double lat = std::clamp(p.lat, -kMercatorMaxLat, kMercatorMaxLat);
  const double x = (p.lon + 180.0) / 360.0;
  const double y = (1.0 - std::asinh(std::tan(lat * kDegToRad)) / std::numbers::pi) / 2.0;
  return {x, y};
}

Coordinate mercator_denormalize(const Vec2& xy) {
  const double lon = xy.x * 360.0 - 180.0;
  const double lat = std::atan(std::sinh(std::numbers::pi * (1.0 - 2.0 * xy.y))) / kDegToRad;
  return {lon, lat};
}

double haversine_distance(const Coordinate& a, const Coordinate& b) {
  const double phi1 = a.lat * kDegToRad;
  const double phi2 = b.lat * kDegToRad;
  const double dphi = (b.lat - a.lat) * kDegToRad;
  const double dlambda = (b.lon - a.lon) * kDegToRad;
  const double s1 = std::sin(dphi / 2.0);
  const double s2 = std::sin(dlambda / 2.0);
  const double h = s1 * s1 + std::cos(phi1) * std::cos(phi2) * s2 * s2;
  return 2.0 * kEarthRadiusMeters * std::asin(std::min(1.0, std::sqrt(h)));
}

std::vector<Polygon> flatten(std::span<const AreaGeometry> geoms) {
  std::vector<Polygon> out;
  for (const auto& g : geoms) {
    if (const auto* p = std::get_if<Polygon>(&g)) {
      out.push_back(*p);
    } else {
      const auto& mp = std::get<MultiPolygon>(g);
      out.insert(out.end(), mp.polygons().begin(), mp.polygons().end());
    }
  }
  return out;
}

Coordinate area_centroid(const MultiPolygon& area) {
  double total = 0.0;
  double cx = 0.0;
  double cy = 0.0;
  const auto accumulate = [&](const LinearRing& ring) {
    const auto& c = ring.coords();
    for (std::size_t i = 0; i + 1 < c.size(); ++i) {
      const double f = c[i].lon * c[i + 1].lat - c[i + 1].lon * c[i].lat;
      total += f;
      cx += (c[i].lon + c[i + 1].lon) * f;
      cy += (c[i].lat + c[i + 1].lat) * f;
    }
  };
  for (const auto& p : area.polygons()) for_each_ring(p, accumulate);
  if (std::abs(total) < 1e-300) return area.bbox().center();
  return {cx / (3.0 * total), cy / (3.0 * total)};
}

}  // namespace geovec
