#include <fstream>

#include <gtest/gtest.h>

#include "geovec/error.hpp"
#include "geovec/io/csv.hpp"
#include "geovec/io/gazetteer.hpp"
#include "geovec/io/geojson.hpp"
#include "geovec/io/osm_xml.hpp"
#include "geovec/io/zip.hpp"
#include "temp_dir.hpp"
#include "zip_writer.hpp"

using namespace geovec;
using namespace geovec::io;
using geovec::testing::TempDir;

namespace {

using Entries = std::map<std::string, std::vector<std::string>>;

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

const TagFilter kRestaurants(Entries{{"amenity", {"restaurant"}}});

}  // namespace

TEST(Csv, QuotesCrlfAndBom) {
  const auto rows = parse_csv("\xEF\xBB\xBF" "a,b\r\n\"x,1\",\"say \"\"hi\"\"\"\r\n\r\nlast,\n");
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(rows[1], (std::vector<std::string>{"x,1", "say \"hi\""}));
  EXPECT_EQ(rows[2], (std::vector<std::string>{"last", ""}));
  EXPECT_EQ(csv_escape("plain"), "plain");
  EXPECT_EQ(csv_escape("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_escape("q\""), "\"q\"\"\"");
}

TEST(Csv, FormatDoubleRoundTrips) {
  for (const double v : {0.1, 1.0 / 3.0, -2.5e-300, 12345678.901234567}) {
    EXPECT_EQ(std::stod(format_double(v)), v);
  }
  EXPECT_EQ(format_double(0.5), "0.5");
}

TEST(Zip, StoredAndDeflatedEntries) {
  for (const bool deflate : {false, true}) {
    const std::string bytes = geovec::testing::make_zip({{"feed/stops.txt", "hello world hello world"}, {"b.txt", ""}}, deflate);
    const ZipArchive z = ZipArchive::from_bytes(bytes);
    EXPECT_EQ(z.names().size(), 2u);
    EXPECT_TRUE(z.contains("stops.txt"));  // basename fallback
    EXPECT_EQ(z.read("stops.txt"), "hello world hello world");
    EXPECT_EQ(z.read("b.txt"), "");
    EXPECT_EQ(kind_of([&] { z.read("missing.txt"); }), ErrorKind::NotFound);
  }
}

TEST(Zip, CorruptArchivesAreMalformed) {
  EXPECT_EQ(kind_of([] { ZipArchive::from_bytes("not a zip at all"); }), ErrorKind::MalformedInput);
  std::string bytes = geovec::testing::make_zip({{"a.txt", "payload"}});
  bytes[36] ^= 0x55;  // payload starts after the 30-byte header and name
  const ZipArchive z = ZipArchive::from_bytes(bytes);
  EXPECT_EQ(kind_of([&] { z.read("a.txt"); }), ErrorKind::MalformedInput);
}

TEST(GeoJson, PropertiesBecomeTextTags) {
  const auto fc = parse_geojson(R"({"type":"FeatureCollection","features":[
    {"type":"Feature","properties":{"price":12.5,"name":"x","ok":true},
     "geometry":{"type":"Point","coordinates":[19.9,50.0]}}]})");
  ASSERT_EQ(fc.size(), 1u);
  EXPECT_EQ(fc[0].feature_id, "f0");
  EXPECT_EQ(fc[0].tags.at("price"), "12.5");
  EXPECT_EQ(fc[0].tags.at("name"), "x");
  EXPECT_EQ(fc[0].tags.at("ok"), "true");
  EXPECT_EQ(std::get<Coordinate>(fc[0].geometry), (Coordinate{19.9, 50.0}));
}

TEST(GeoJson, EmptyCollection) {
  EXPECT_TRUE(parse_geojson(R"({"type":"FeatureCollection","features":[]})").empty());
  const auto doc = nlohmann::json::parse(to_geojson(FeatureCollection{}));
  EXPECT_TRUE(doc.at("features").is_array());
  EXPECT_TRUE(doc.at("features").empty());
}

TEST(GeoJson, RoundTripPreservesOrderTagsAndGeometry) {
  FeatureCollection fc;
  fc.add({"z", Coordinate{1.123456789, 2}, {{"k", "v"}}});
  fc.add({"a", LineString({{0, 0}, {1, 1}}), {}});
  fc.add({"m", Polygon(LinearRing({{0, 0}, {4, 0}, {4, 4}, {0, 4}}), {LinearRing({{1, 1}, {2, 1}, {2, 2}})}), {{"x", "1"}}});
  fc.add({"mp", MultiPolygon({Polygon(std::vector<Coordinate>{{5, 5}, {6, 5}, {6, 6}})}), {}});
  TempDir dir;
  write_geojson(fc, dir.file("f.geojson"));
  const FeatureCollection back = load_geojson(dir.file("f.geojson"));
  EXPECT_EQ(back, fc);
  EXPECT_EQ(to_geojson(back), to_geojson(fc));
}

TEST(GeoJson, Errors) {
  EXPECT_EQ(kind_of([] { parse_geojson("{"); }), ErrorKind::MalformedInput);
  EXPECT_EQ(kind_of([] { parse_geojson(R"({"type":"FeatureCollection","features":[{"type":"Feature","properties":{},"geometry":null}]})"); }),
            ErrorKind::MalformedInput);
  EXPECT_EQ(kind_of([] { load_geojson("/nonexistent/x.geojson"); }), ErrorKind::IoFailure);
  EXPECT_EQ(kind_of([] { area_from_features(FeatureCollection{}); }), ErrorKind::EmptyArea);
}

TEST(Osm, NodeWayFilterAndRelations) {
  const std::string xml = R"(<?xml version="1.0"?>
<osm version="0.6">
  <node id="1" lat="50.0" lon="19.0"><tag k="amenity" v="restaurant"/><tag k="name" v="Bistro"/></node>
  <node id="2" lat="50.0" lon="19.1"><tag k="shop" v="bakery"/></node>
  <node id="3" lat="50.0" lon="19.2"/>
  <node id="4" lat="50.1" lon="19.2"/>
  <node id="5" lat="50.1" lon="19.1"/>
  <node id="6" lat="50.05" lon="19.05"/>
  <way id="10"><nd ref="3"/><nd ref="4"/><nd ref="5"/><nd ref="6"/><nd ref="3"/><tag k="leisure" v="park"/></way>
  <way id="11"><nd ref="3"/><nd ref="4"/><tag k="leisure" v="park"/></way>
  <way id="12"><nd ref="3"/><nd ref="99"/><tag k="highway" v="service"/></way>
  <relation id="20"><member type="way" ref="10" role="outer"/><tag k="leisure" v="park"/></relation>
</osm>)";
  OsmLoadStats stats;
  const auto fc = parse_osm_xml(xml, TagFilter(Entries{{"amenity", {"restaurant"}}, {"leisure", {"park"}}}), &stats);
  ASSERT_EQ(fc.size(), 3u);
  EXPECT_EQ(fc[0].feature_id, "node/1");
  EXPECT_EQ(fc[0].tags, (Tags{{"amenity", "restaurant"}}));
  EXPECT_TRUE(std::holds_alternative<Polygon>(fc.find("way/10")->geometry));
  EXPECT_TRUE(std::holds_alternative<LineString>(fc.find("way/11")->geometry));
  EXPECT_EQ(stats.nodes, 6u);
  EXPECT_EQ(stats.ways, 3u);
  EXPECT_EQ(stats.relations_skipped, 1u);

  EXPECT_TRUE(parse_osm_xml(R"(<osm><node id="2" lat="1" lon="1"><tag k="shop" v="bakery"/></node></osm>)", kRestaurants).empty());
}

TEST(Osm, MalformedInputs) {
  EXPECT_EQ(kind_of([] { parse_osm_xml("<osm><node id=\"1\" lat=\"1\"", kRestaurants); }), ErrorKind::MalformedInput);
  EXPECT_EQ(kind_of([] { parse_osm_xml(R"(<osm><node id="1" lat="x" lon="1"/></osm>)", kRestaurants); }),
            ErrorKind::MalformedInput);
  EXPECT_EQ(kind_of([] {
              parse_osm_xml(R"(<osm><way id="1"><nd ref="5"/><nd ref="6"/><tag k="amenity" v="restaurant"/></way></osm>)",
                            kRestaurants);
            }),
            ErrorKind::MalformedInput);
}

TEST(Osm, FixtureFile) {
  const auto fc = load_osm_xml(geovec::testing::fixture("city_a.osm"),
                               TagFilter(Entries{{"leisure", {"park"}}, {"amenity", {"restaurant"}}}));
  EXPECT_EQ(fc.size(), 126u);  // 90 restaurants, 30 park ways, 6 park nodes
}

TEST(TagFilter, Semantics) {
  const TagFilter any(Entries{{"amenity", {}}});
  EXPECT_TRUE(any.matches({{"amenity", "cafe"}}));
  EXPECT_FALSE(any.matches({{"shop", "cafe"}}));
  EXPECT_TRUE(kRestaurants.accepts("amenity", "restaurant"));
  EXPECT_FALSE(kRestaurants.accepts("amenity", "cafe"));
  EXPECT_EQ(kind_of([] { TagFilter(Entries{}); }), ErrorKind::MalformedInput);
  EXPECT_EQ(kind_of([] { TagFilter(Entries{{"a", {"x", "x"}}}); }), ErrorKind::MalformedInput);
}

TEST(Gazetteer, LookupIsCaseInsensitive) {
  const Gazetteer g = Gazetteer::load(geovec::testing::fixture("gazetteer.geojson"));
  EXPECT_EQ(g.size(), 2u);
  EXPECT_EQ(g.geocode("City A"), g.geocode("  city a "));
  EXPECT_NE(g.geocode("City A"), g.geocode("City B"));
  EXPECT_EQ(kind_of([&] { g.geocode("Atlantis"); }), ErrorKind::NotFound);
}
