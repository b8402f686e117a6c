#include <cmath>
#include <map>
#include <set>

#include <gtest/gtest.h>

#include "geovec/error.hpp"
#include "geovec/io/geojson.hpp"
#include "geovec/regions.hpp"
#include "geovec/rng.hpp"
#include "oracles.hpp"
#include "temp_dir.hpp"

using namespace geovec;

namespace {

MultiPolygon box(double x0, double y0, double x1, double y1) {
  return MultiPolygon({Polygon(std::vector<Coordinate>{{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}})});
}

template <typename F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::NumericalFailure;
}

Coordinate random_in(const MultiPolygon& area, Rng& rng) {
  const BBox b = area.bbox();
  for (;;) {
    const Coordinate p{rng.uniform(b.min_lon, b.max_lon), rng.uniform(b.min_lat, b.max_lat)};
    for (const auto& poly : area.polygons()) {
      if (oracle::in_polygon(poly, p)) return p;
    }
  }
}

FeatureCollection point_seeds(const std::vector<Coordinate>& pts) {
  FeatureCollection fc;
  for (std::size_t i = 0; i < pts.size(); ++i) fc.add({"s" + std::to_string(i), pts[i], {}});
  return fc;
}

}  // namespace

TEST(RegionMethod, Names) {
  EXPECT_EQ(to_string(RegionMethod::Voronoi), "voronoi");
  EXPECT_EQ(parse_region_method("slippy"), RegionMethod::Slippy);
  EXPECT_FALSE(parse_region_method("h3"));
}

TEST(HexId, RenderParse) {
  const HexCellId id{8, -3, 12};
  EXPECT_EQ(id.render(), "hex_8_-3_12");
  EXPECT_EQ(HexCellId::parse(id.render()), id);
  EXPECT_FALSE(HexCellId::parse("hex_8_03_1"));
  EXPECT_FALSE(HexCellId::parse("hex_8_1"));
  EXPECT_EQ((HexCellId{1, 0, 0}).distance({1, 2, -1}), 2);
}

TEST(Hex, OriginAndCenterRoundTrip) {
  const LocalPlane eq(0.0);
  for (int res = 0; res <= kMaxHexResolution; ++res) EXPECT_EQ(hex_cell_of({0, 0}, res, eq), (HexCellId{res, 0, 0}));
  const LocalPlane frame(50.0);
  const HexCellId c{6, 3, -2};
  EXPECT_EQ(hex_cell_of(hex_cell_center(c, frame), 6, frame), c);
}

TEST(Hex, PolygonShapeAreaAndSharedVertices) {
  const LocalPlane eq(0.0);
  const double s = hex_cell_size(4);
  const Polygon h = hex_cell_polygon({4, 0, 0}, eq);
  double north = -1e9;
  for (const auto& v : h.exterior().coords()) north = std::max(north, v.lat);
  EXPECT_NEAR(north, s, 1e-15);
  const LocalPlane frame(47.3);
  EXPECT_NEAR(planar_area(hex_cell_polygon({4, 5, -7}, frame), frame), 3 * std::sqrt(3.0) / 2 * s * s, 1e-9 * s * s);
  const auto verts = [&](const HexCellId& id) {
    std::set<std::pair<double, double>> out;
    const Polygon poly = hex_cell_polygon(id, frame);
    for (const auto& v : poly.exterior().coords()) out.emplace(v.lon, v.lat);
    return out;
  };
  const auto a = verts({4, 0, 0}), b = verts({4, 1, 0});
  int shared = 0;
  for (const auto& v : a) shared += static_cast<int>(b.count(v));
  EXPECT_EQ(shared, 2);
}

TEST(Hex, AssignmentMatchesNearestCenterOracle) {
  const LocalPlane frame(50.06);
  Rng rng(21);
  const int res = 7;
  for (int i = 0; i < 10000; ++i) {
    const Coordinate p{rng.uniform(19.5, 20.5), rng.uniform(49.8, 50.3)};
    const HexCellId got = hex_cell_of(p, res, frame);
    std::vector<Vec2> centers;
    std::vector<HexCellId> ids;
    for (int dq = -2; dq <= 2; ++dq) {
      for (int dr = -2; dr <= 2; ++dr) {
        const HexCellId c{res, got.q + dq, got.r + dr};
        if (c.distance(got) > 2) continue;
        ids.push_back(c);
        centers.push_back(frame.to_frame(hex_cell_center(c, frame)));
      }
    }
    const auto [idx, margin] = oracle::nearest(centers, frame.to_frame(p));
    if (margin < 1e-12) continue;
    ASSERT_EQ(ids[idx], got);
  }
}

TEST(Hex, TinyAreaGivesOneCell) {
  const LocalPlane frame(0.0);
  const Coordinate c = hex_cell_center({5, 2, 1}, LocalPlane(LocalPlane::for_area(box(0, 0, 1, 1)).lat_ref()));
  (void)frame;
  const RegionSet rs = regionalize_hex(box(c.lon - 1e-6, c.lat - 1e-6, c.lon + 1e-6, c.lat + 1e-6), 5);
  ASSERT_EQ(rs.size(), 1u);
  EXPECT_EQ(rs.method(), RegionMethod::Hex);
  EXPECT_EQ(rs.params().resolution, 5);
}

TEST(Hex, CoverageAndInvariants) {
  const MultiPolygon area = io::area_from_features(io::load_geojson(geovec::testing::fixture("city_b.geojson")));
  const RegionSet rs = regionalize_hex(area, 9);
  EXPECT_GT(rs.size(), 20u);
  for (std::size_t i = 1; i < rs.size(); ++i) EXPECT_LT(rs[i - 1].region_id, rs[i].region_id);
  for (const auto& r : rs) EXPECT_TRUE(polygons_intersect(r.geometry, area.polygons()[0]));
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    const Coordinate p = random_in(area, rng);
    bool covered = false;
    for (const auto& r : rs) covered = covered || point_in_polygon(p, r.geometry);
    ASSERT_TRUE(covered);
  }
}

TEST(Hex, IndependentOfRingOrder) {
  const std::vector<Coordinate> ring{{19.9, 50.0}, {20.1, 50.0}, {20.1, 50.1}, {19.9, 50.1}};
  std::vector<Coordinate> rotated{ring[2], ring[3], ring[0], ring[1]};
  std::vector<Coordinate> reversed(ring.rbegin(), ring.rend());
  const RegionSet a = regionalize_hex(MultiPolygon({Polygon(ring)}), 9);
  EXPECT_EQ(a, regionalize_hex(MultiPolygon({Polygon(rotated)}), 9));
  EXPECT_EQ(a, regionalize_hex(MultiPolygon({Polygon(reversed)}), 9));
}

TEST(Hex, Errors) {
  EXPECT_EQ(kind_of([] { regionalize_hex(box(0, 0, 1, 1), -1); }), ErrorKind::InvalidResolution);
  EXPECT_EQ(kind_of([] { regionalize_hex(box(0, 0, 1, 1), 16); }), ErrorKind::InvalidResolution);
  EXPECT_EQ(kind_of([] { regionalize_hex(box(-60, -60, 60, 60), 15); }), ErrorKind::TooManyRegions);
}

TEST(Tile, RenderParse) {
  const TileId t{12, 2270, 1388};
  EXPECT_EQ(t.render(), "tile_12_2270_1388");
  EXPECT_EQ(TileId::parse(t.render()), t);
  EXPECT_FALSE(TileId::parse("tile_1_2_0"));  // x out of range at z=1
  EXPECT_FALSE(TileId::parse("tile_1_-1_0"));
}

TEST(Tile, StandardFormula) {
  EXPECT_EQ(tile_of({123, -45}, 0), (TileId{0, 0, 0}));
  EXPECT_EQ(tile_of({10, 50}, 1), (TileId{1, 1, 0}));
  EXPECT_EQ(tile_of({-180, 0}, 3).x, 0);
  const BBox b = tile_bounds({1, 1, 0});
  EXPECT_DOUBLE_EQ(b.min_lon, 0.0);
  EXPECT_DOUBLE_EQ(b.max_lon, 180.0);
  EXPECT_NEAR(b.max_lat, kMercatorMaxLat, 1e-9);
  EXPECT_NEAR(b.min_lat, 0.0, 1e-12);
}

TEST(Slippy, WorldAtZoomOneAndPartition) {
  const RegionSet world = regionalize_slippy(box(-180, -85, 180, 85), 1);
  EXPECT_EQ(world.size(), 4u);
  const RegionSet rs = regionalize_slippy(box(19.8, 50.0, 20.2, 50.1), 11);
  EXPECT_GT(rs.size(), 4u);
  for (std::size_t i = 0; i < rs.size(); ++i) {
    for (std::size_t j = i + 1; j < rs.size(); ++j) {
      const BBox a = rs[i].geometry.bbox(), b = rs[j].geometry.bbox();
      const double ox = std::min(a.max_lon, b.max_lon) - std::max(a.min_lon, b.min_lon);
      const double oy = std::min(a.max_lat, b.max_lat) - std::max(a.min_lat, b.min_lat);
      EXPECT_FALSE(ox > 0 && oy > 0) << rs[i].region_id << " " << rs[j].region_id;
    }
  }
  EXPECT_EQ(kind_of([] { regionalize_slippy(box(0, 0, 1, 1), 23); }), ErrorKind::InvalidZoom);
}

TEST(Voronoi, SingleSeedIsAreaBbox) {
  const RegionSet rs = regionalize_voronoi(box(0, 0, 2, 1), point_seeds({{0.5, 0.5}}));
  ASSERT_EQ(rs.size(), 1u);
  EXPECT_EQ(rs[0].region_id, "voronoi_s0");
  EXPECT_EQ(rs[0].geometry.bbox().min_lon, 0.0);
  EXPECT_EQ(rs[0].geometry.bbox().max_lon, 2.0);
  EXPECT_NEAR(rs[0].geometry.exterior().signed_area(), 2.0, 1e-12);
}

TEST(Voronoi, MirrorSeedsSplitAtMeridian) {
  const RegionSet rs = regionalize_voronoi(box(-1, -1, 1, 1), point_seeds({{-0.5, 0.2}, {0.5, 0.2}}));
  ASSERT_EQ(rs.size(), 2u);
  const LocalPlane frame(0.0);
  EXPECT_NEAR(planar_area(rs[0].geometry, frame), planar_area(rs[1].geometry, frame), 1e-9);
  EXPECT_NEAR(rs[0].geometry.bbox().max_lon, 0.0, 1e-12);
  EXPECT_NEAR(rs[1].geometry.bbox().min_lon, 0.0, 1e-12);
}

TEST(Voronoi, NearestSeedOracle) {
  Rng rng(77);
  const MultiPolygon area = box(19.7, 49.95, 20.3, 50.2);
  std::vector<Coordinate> seeds;
  for (int i = 0; i < 5; ++i) seeds.push_back({rng.uniform(19.7, 20.3), rng.uniform(49.95, 50.2)});
  const RegionSet rs = regionalize_voronoi(area, point_seeds(seeds));
  const LocalPlane frame = *rs.frame();
  std::vector<Vec2> fs;
  for (const auto& s : seeds) fs.push_back(frame.to_frame(s));
  for (int i = 0; i < 10000; ++i) {
    const Coordinate p{rng.uniform(19.7, 20.3), rng.uniform(49.95, 50.2)};
    const auto [idx, margin] = oracle::nearest(fs, frame.to_frame(p));
    if (margin < 1e-9) continue;
    const auto cell = rs.index_of("voronoi_s" + std::to_string(idx));
    ASSERT_TRUE(cell);
    ASSERT_TRUE(point_in_polygon(p, rs[*cell].geometry));
  }
}

TEST(Voronoi, Errors) {
  EXPECT_EQ(kind_of([] { regionalize_voronoi(box(0, 0, 1, 1), FeatureCollection{}); }), ErrorKind::NoSeeds);
  EXPECT_EQ(kind_of([] { regionalize_voronoi(box(0, 0, 1, 1), point_seeds({{0.5, 0.5}, {0.5, 0.5}})); }),
            ErrorKind::DuplicateSeeds);
}

TEST(RegionSetIo, RoundTrip) {
  geovec::testing::TempDir dir;
  for (const RegionSet& rs : {regionalize_hex(box(19.9, 50.0, 20.0, 50.05), 9),
                              regionalize_slippy(box(19.9, 50.0, 20.0, 50.05), 12),
                              regionalize_voronoi(box(19.9, 50.0, 20.0, 50.05),
                                                  point_seeds({{19.92, 50.01}, {19.97, 50.03}}))}) {
    write_region_set(rs, dir.file("r.geojson"));
    const RegionSet back = load_region_set(dir.file("r.geojson"));
    EXPECT_EQ(back.method(), rs.method());
    EXPECT_EQ(back.params(), rs.params());
    EXPECT_EQ(back.ids(), rs.ids());
    EXPECT_EQ(region_set_to_geojson(back), region_set_to_geojson(rs));
  }
}

TEST(RegionSet, DuplicateIdsRejected) {
  const Polygon p(std::vector<Coordinate>{{0, 0}, {1, 0}, {1, 1}});
  EXPECT_THROW(RegionSet(RegionMethod::Voronoi, {}, {{"a", p}, {"a", p}}), Error);
}
