#include <cmath>
#include <cstdlib>

#include "geovec/error.hpp"
#include "geovec/regions.hpp"

namespace geovec {

namespace {

constexpr double kSqrt3 = 1.7320508075688772;
constexpr long kMaxCandidates = 4'000'000;

void check_resolution(int res) {
  if (res < 0 || res > kMaxHexResolution) {
    throw Error(ErrorKind::InvalidResolution,
                "hex resolution must be in [0, 15], got " + std::to_string(res));
  }
}

// Vertices sit on a lattice (half_width * i, half_height * j) with integer
// i, j, so neighbouring cells produce bit-identical shared vertices.
struct Lattice {
  double half_width;   // s * sqrt(3) / 2
  double half_height;  // s / 2
};

Lattice lattice(int res) {
  const double s = hex_cell_size(res);
  return {s * kSqrt3 / 2.0, s / 2.0};
}

std::optional<int> parse_int(std::string_view text) {
  if (text.empty()) return std::nullopt;
  std::string buf(text);
  char* end = nullptr;
  const long v = std::strtol(buf.c_str(), &end, 10);
  if (end != buf.c_str() + buf.size() || v < -1'000'000'000L || v > 1'000'000'000L) {
    return std::nullopt;
  }
  // Canonical form only: no '+', no leading zeros.
  if (std::to_string(v) != buf) return std::nullopt;
  return static_cast<int>(v);
}

}  // namespace

std::string HexCellId::render() const {
  return "hex_" + std::to_string(res) + "_" + std::to_string(q) + "_" + std::to_string(r);
}

std::optional<HexCellId> HexCellId::parse(std::string_view id) {
  if (id.substr(0, 4) != "hex_") return std::nullopt;
  id.remove_prefix(4);
  const auto a = id.find('_');
  if (a == std::string_view::npos) return std::nullopt;
  const auto b = id.find('_', a + 1);
  if (b == std::string_view::npos) return std::nullopt;
  const auto res = parse_int(id.substr(0, a));
  const auto q = parse_int(id.substr(a + 1, b - a - 1));
  const auto r = parse_int(id.substr(b + 1));
  if (!res || !q || !r || *res < 0 || *res > kMaxHexResolution) return std::nullopt;
  return HexCellId{*res, *q, *r};
}

int HexCellId::distance(const HexCellId& o) const {
  const int dq = q - o.q;
  const int dr = r - o.r;
  return (std::abs(dq) + std::abs(dr) + std::abs(dq + dr)) / 2;
}

double hex_cell_size(int res) {
  check_resolution(res);
  return std::ldexp(10.0, -res);
}

HexCellId hex_cell_of(const Coordinate& p, int res, const LocalPlane& frame) {
  const double s = hex_cell_size(res);
  const Vec2 v = frame.to_frame(p);
  const double fq = (kSqrt3 / 3.0 * v.x - v.y / 3.0) / s;
  const double fr = (2.0 / 3.0 * v.y) / s;
  const double fs = -fq - fr;
  double rq = std::round(fq);
  double rr = std::round(fr);
  const double rs = std::round(fs);
  const double dq = std::abs(rq - fq);
  const double dr = std::abs(rr - fr);
  const double ds = std::abs(rs - fs);
  if (dq > dr && dq > ds) {
    rq = -rr - rs;
  } else if (dr > ds) {
    rr = -rq - rs;
  }
  return {res, static_cast<int>(rq), static_cast<int>(rr)};
}

Coordinate hex_cell_center(const HexCellId& cell, const LocalPlane& frame) {
  const Lattice l = lattice(cell.res);
  return frame.from_frame({l.half_width * (2.0 * cell.q + cell.r), l.half_height * (3.0 * cell.r)});
}

Polygon hex_cell_polygon(const HexCellId& cell, const LocalPlane& frame) {
  const Lattice l = lattice(cell.res);
  const long ci = 2L * cell.q + cell.r;
  const long cj = 3L * cell.r;
  // Counter-clockwise from the 30 degree vertex.
  static constexpr int kDi[6] = {1, 0, -1, -1, 0, 1};
  static constexpr int kDj[6] = {1, 2, 1, -1, -2, -1};
  std::vector<Coordinate> ring;
  ring.reserve(7);
  for (int k = 0; k < 6; ++k) {
    ring.push_back(frame.from_frame({l.half_width * static_cast<double>(ci + kDi[k]),
                                     l.half_height * static_cast<double>(cj + kDj[k])}));
  }
  ring.push_back(ring.front());
  return Polygon(std::move(ring));
}

RegionSet regionalize_hex(const MultiPolygon& area, int res) {
  check_resolution(res);
  const LocalPlane frame = LocalPlane::for_area(area);
  const double s = hex_cell_size(res);
  const BBox box = area.bbox();
  const double x_min = box.min_lon * frame.lon_scale();
  const double x_max = box.max_lon * frame.lon_scale();
  const long r_lo = static_cast<long>(std::floor(box.min_lat / (1.5 * s))) - 1;
  const long r_hi = static_cast<long>(std::ceil(box.max_lat / (1.5 * s))) + 1;
  const double col = s * kSqrt3;
  const long width = static_cast<long>(std::ceil((x_max - x_min) / col)) + 4;
  if ((r_hi - r_lo + 1) * width > kMaxCandidates) {
    throw Error(ErrorKind::TooManyRegions,
                "area too large for hex resolution " + std::to_string(res));
  }

  std::vector<Region> regions;
  for (long r = r_lo; r <= r_hi; ++r) {
    const long q_lo = static_cast<long>(std::floor(x_min / col - r / 2.0)) - 1;
    const long q_hi = static_cast<long>(std::ceil(x_max / col - r / 2.0)) + 1;
    for (long q = q_lo; q <= q_hi; ++q) {
      const HexCellId cell{res, static_cast<int>(q), static_cast<int>(r)};
      Polygon poly = hex_cell_polygon(cell, frame);
      if (!poly.bbox().intersects(box)) continue;
      for (const auto& part : area.polygons()) {
        if (polygons_intersect(poly, part)) {
          regions.push_back({cell.render(), std::move(poly)});
          break;
        }
      }
    }
  }
  RegionParams params;
  params.resolution = res;
  params.lat_ref = frame.lat_ref();
  return RegionSet(RegionMethod::Hex, params, std::move(regions));
}

}  // namespace geovec
