#include <array>
#include <cmath>
#include <functional>

#include <gtest/gtest.h>

#include "geovec/error.hpp"
#include "geovec/geometry.hpp"
#include "geovec/rng.hpp"
#include "oracles.hpp"

using namespace geovec;

namespace {

Polygon square(double x0, double y0, double x1, double y1) {
  return Polygon(std::vector<Coordinate>{{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}});
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::MalformedInput;
}

}  // namespace

TEST(Coordinate, ValidatesAndWraps) {
  EXPECT_EQ(Coordinate::checked(190, 10), (Coordinate{-170, 10}));
  EXPECT_EQ(Coordinate::checked(-190, 10), (Coordinate{170, 10}));
  EXPECT_EQ(Coordinate::checked(180, 0).lon, 180);
  EXPECT_EQ(kind_of([] { Coordinate::checked(0, 91); }), ErrorKind::InvalidGeometry);
  EXPECT_EQ(kind_of([] { Coordinate::checked(NAN, 0); }), ErrorKind::InvalidGeometry);
}

TEST(LinearRing, ClosesDeduplicatesAndRejectsDegenerate) {
  LinearRing r({{0, 0}, {1, 0}, {1, 0}, {1, 1}, {0, 1}});
  EXPECT_EQ(r.coords().size(), 5u);
  EXPECT_EQ(r.coords().front(), r.coords().back());
  EXPECT_DOUBLE_EQ(r.signed_area(), 1.0);
  EXPECT_DOUBLE_EQ(r.reversed().signed_area(), -1.0);
  EXPECT_EQ(kind_of([] { LinearRing({{0, 0}, {1, 1}, {2, 2}}); }), ErrorKind::InvalidGeometry);
  EXPECT_EQ(kind_of([] { LinearRing({{0, 0}, {1, 0}}); }), ErrorKind::InvalidGeometry);
}

TEST(Polygon, NormalizesOrientation) {
  const Polygon cw(LinearRing({{0, 0}, {0, 4}, {4, 4}, {4, 0}}),
                   {LinearRing({{1, 1}, {2, 1}, {2, 2}, {1, 2}})});
  EXPECT_GT(cw.exterior().signed_area(), 0);
  EXPECT_LT(cw.holes()[0].signed_area(), 0);
}

TEST(Orientation, Signs) {
  EXPECT_EQ(orientation({0, 0}, {1, 0}, {1, 1}), 1);
  EXPECT_EQ(orientation({0, 0}, {1, 0}, {1, -1}), -1);
  EXPECT_EQ(orientation({0, 0}, {1, 1}, {2, 2}), 0);
}

TEST(PointInPolygon, ClosedSetSemantics) {
  const Polygon with_hole(LinearRing({{0, 0}, {4, 0}, {4, 4}, {0, 4}}),
                          {LinearRing({{1, 1}, {3, 1}, {3, 3}, {1, 3}})});
  EXPECT_TRUE(point_in_polygon({0.5, 0.5}, with_hole));
  EXPECT_FALSE(point_in_polygon({2, 2}, with_hole));
  EXPECT_TRUE(point_in_polygon({0, 2}, with_hole));  // outer edge
  EXPECT_TRUE(point_in_polygon({1, 2}, with_hole));  // hole edge
  EXPECT_TRUE(point_in_polygon({4, 4}, with_hole));  // vertex
  EXPECT_FALSE(point_in_polygon({5, 2}, with_hole));
}

TEST(PointInPolygon, AgreesWithWindingNumberOracle) {
  // Star-shaped concave polygon and a random cloud off the boundary.
  std::vector<Coordinate> star;
  for (int i = 0; i < 10; ++i) {
    const double a = i * M_PI / 5.0;
    const double r = i % 2 == 0 ? 3.0 : 1.2;
    star.push_back({r * std::cos(a), r * std::sin(a)});
  }
  const Polygon poly(LinearRing(star), {LinearRing({{-0.3, -0.3}, {0.3, -0.3}, {0.3, 0.3}, {-0.3, 0.3}})});
  Rng rng(5);
  for (int i = 0; i < 5000; ++i) {
    const Coordinate p{rng.uniform(-3.5, 3.5), rng.uniform(-3.5, 3.5)};
    ASSERT_EQ(point_in_polygon(p, poly), oracle::in_polygon(poly, p)) << p.lon << "," << p.lat;
  }
}

TEST(Segments, AgreeWithExactIntegerOracle) {
  Rng rng(11);
  int hits = 0;
  for (int i = 0; i < 20000; ++i) {
    auto pt = [&] { return Coordinate{static_cast<double>(rng.below(9)), static_cast<double>(rng.below(9))}; };
    const Coordinate a1 = pt(), a2 = pt(), b1 = pt(), b2 = pt();
    const bool expected = oracle::integer_segments_intersect(a1, a2, b1, b2);
    hits += expected;
    ASSERT_EQ(segments_intersect(a1, a2, b1, b2), expected)
        << a1.lon << "," << a1.lat << " " << a2.lon << "," << a2.lat << " / " << b1.lon << ","
        << b1.lat << " " << b2.lon << "," << b2.lat;
  }
  EXPECT_GT(hits, 1000);
}

TEST(Segments, AgreeWithDenseSamplingOracle) {
  // Lattice endpoints in [0, 8]: disjoint segments stay >= 1 / (8 sqrt 2) apart,
  // while touching ones have sampled distance <= length / samples < 0.03.
  const std::vector<std::array<Coordinate, 4>> branches = {
      {{{0, 0}, {1, 1}, {0, 1}, {1, 0}}},  // proper crossing
      {{{0, 0}, {1, 0}, {0, 1}, {1, 1}}},  // parallel disjoint
      {{{0, 0}, {2, 0}, {1, 0}, {3, 0}}},  // collinear overlap
      {{{0, 0}, {1, 0}, {2, 0}, {3, 0}}},  // collinear disjoint
      {{{0, 0}, {2, 0}, {1, 0}, {1, 2}}},  // T junction
      {{{0, 0}, {1, 1}, {1, 1}, {2, 0}}},  // shared endpoint
      {{{0, 0}, {2, 2}, {3, 0}, {2, 1}}},  // endpoint-side near miss
  };
  for (const auto& b : branches) {
    EXPECT_EQ(segments_intersect(b[0], b[1], b[2], b[3]),
              oracle::sampled_segments_touch(b[0], b[1], b[2], b[3], 400, 0.044));
  }
  Rng rng(12);
  for (int i = 0; i < 300; ++i) {
    auto pt = [&] { return Coordinate{static_cast<double>(rng.below(9)), static_cast<double>(rng.below(9))}; };
    const Coordinate a1 = pt(), a2 = pt(), b1 = pt(), b2 = pt();
    ASSERT_EQ(segments_intersect(a1, a2, b1, b2), oracle::sampled_segments_touch(a1, a2, b1, b2, 400, 0.044));
  }
}

TEST(PolygonsIntersect, TouchingContainedDisjoint) {
  const Polygon a = square(0, 0, 2, 2);
  EXPECT_TRUE(polygons_intersect(a, square(2, 0, 3, 1)));          // shared edge
  EXPECT_TRUE(polygons_intersect(a, square(2, 2, 3, 3)));          // shared corner
  EXPECT_TRUE(polygons_intersect(a, square(0.5, 0.5, 1, 1)));      // contained
  EXPECT_TRUE(polygons_intersect(square(0.5, 0.5, 1, 1), a));
  EXPECT_FALSE(polygons_intersect(a, square(2.1, 0, 3, 1)));
  const Polygon donut(LinearRing({{0, 0}, {10, 0}, {10, 10}, {0, 10}}),
                      {LinearRing({{2, 2}, {8, 2}, {8, 8}, {2, 8}})});
  EXPECT_FALSE(polygons_intersect(donut, square(3, 3, 4, 4)));  // inside the hole
}

TEST(LineString, IntersectsPolygon) {
  const Polygon a = square(0, 0, 2, 2);
  EXPECT_TRUE(linestring_intersects_polygon(LineString({{-1, 1}, {3, 1}}), a));
  EXPECT_TRUE(linestring_intersects_polygon(LineString({{0.5, 0.5}, {1, 1}}), a));
  EXPECT_TRUE(linestring_intersects_polygon(LineString({{2, 3}, {2, 2}}), a));
  EXPECT_FALSE(linestring_intersects_polygon(LineString({{3, 3}, {4, 4}}), a));
}

TEST(Clip, HalfplaneKeepsLowerSide) {
  const Polygon a = square(0, 0, 2, 2);
  const auto half = clip_polygon_halfplane(a, {1, 0}, {1, 0});
  ASSERT_TRUE(half);
  EXPECT_NEAR(half->exterior().signed_area(), 2.0, 1e-12);
  EXPECT_FALSE(clip_polygon_halfplane(a, {-1, 0}, {1, 0}));
  const auto all = clip_polygon_halfplane(a, {5, 0}, {1, 0});
  ASSERT_TRUE(all);
  EXPECT_NEAR(all->exterior().signed_area(), 4.0, 1e-12);
}

TEST(Area, PlanarAndCentroid) {
  const LocalPlane frame(60.0);
  EXPECT_NEAR(planar_area(square(0, 0, 2, 1), frame), 1.0, 1e-12);  // cos 60 = 0.5
  const MultiPolygon mp({square(0, 0, 2, 2), square(4, 0, 6, 2)});
  const Coordinate c = area_centroid(mp);
  EXPECT_NEAR(c.lon, 3.0, 1e-12);
  EXPECT_NEAR(c.lat, 1.0, 1e-12);
  EXPECT_NEAR(LocalPlane::for_area(MultiPolygon({square(0, 50.004, 1, 50.01)})).lat_ref(), 50.01, 1e-12);
}

TEST(Mercator, RoundTripAndClamp) {
  const Coordinate p{21.01, 52.23};
  const Coordinate back = mercator_denormalize(mercator_normalize(p));
  EXPECT_NEAR(back.lon, p.lon, 1e-9);
  EXPECT_NEAR(back.lat, p.lat, 1e-9);
  EXPECT_NEAR(mercator_normalize({0, 89.9}).y, 0.0, 1e-12);
  EXPECT_DOUBLE_EQ(mercator_normalize({0, 0}).y, 0.5);
}

TEST(Haversine, QuarterMeridian) {
  EXPECT_NEAR(haversine_distance({0, 0}, {0, 90}), kEarthRadiusMeters * M_PI / 2, 1e-6);
  EXPECT_DOUBLE_EQ(haversine_distance({10, 10}, {10, 10}), 0.0);
}
