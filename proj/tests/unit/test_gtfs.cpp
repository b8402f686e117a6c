#include <gtest/gtest.h>

#include "geovec/error.hpp"
#include "geovec/io/csv.hpp"
#include "geovec/io/gtfs.hpp"
#include "geovec/io/zip.hpp"
#include "temp_dir.hpp"
#include "toy_gtfs.hpp"
#include "zip_writer.hpp"

using namespace geovec;
using namespace geovec::io;
using namespace geovec::testing;

namespace {

using Entries = std::map<std::string, std::vector<std::string>>;

ZipArchive archive(const ZipEntries& e, bool deflate = false) { return ZipArchive::from_bytes(make_zip(e, deflate)); }

std::array<int, 24> hours(std::initializer_list<std::pair<int, int>> set) {
  std::array<int, 24> a{};
  for (const auto& [h, v] : set) a[h] = v;
  return a;
}

}  // namespace

TEST(GtfsTime, Parse) {
  EXPECT_EQ(parse_gtfs_time("08:05:00"), 8 * 3600 + 300);
  EXPECT_EQ(parse_gtfs_time("8:05:00"), 8 * 3600 + 300);
  EXPECT_EQ(parse_gtfs_time("25:00:01"), 25 * 3600 + 1);
  EXPECT_FALSE(parse_gtfs_time("8:5:00"));
  EXPECT_FALSE(parse_gtfs_time("08:60:00"));
  EXPECT_FALSE(parse_gtfs_time(""));
}

TEST(Gtfs, ToyFeedMatchesHandEnumeration) {
  for (const bool deflate : {false, true}) {
    const auto stops = load_gtfs(archive(toy_feed(), deflate));
    ASSERT_EQ(stops.size(), 3u);
    EXPECT_EQ(stops[0].stop_id, "S1");
    EXPECT_EQ(stops[0].location, (Coordinate{19.9370, 50.0610}));
    EXPECT_EQ(stops[0].trips_at_hour, hours({{8, 3}, {23, 1}}));
    EXPECT_EQ(stops[0].directions_at_hour, hours({{8, 2}, {23, 1}}));
    EXPECT_EQ(stops[1].trips_at_hour, hours({{8, 2}, {9, 1}, {1, 1}}));
    EXPECT_EQ(stops[1].directions_at_hour, hours({{8, 2}, {9, 1}, {1, 1}}));
    EXPECT_EQ(stops[2].trips_at_hour, hours({{8, 1}, {0, 1}}));
    EXPECT_EQ(stops[2].directions_at_hour, hours({{8, 1}, {0, 1}}));
  }
}

TEST(Gtfs, StopWithoutTimesIsAllZero) {
  ZipEntries e = toy_feed();
  e[0].second += "S4,Idle,50.07,19.95\n";
  const auto stops = load_gtfs(archive(e));
  ASSERT_EQ(stops.size(), 4u);
  EXPECT_EQ(stops[3].trips_at_hour, hours({}));
  EXPECT_EQ(stops[3].directions_at_hour, hours({}));
}

TEST(Gtfs, DirectionsNeverExceedTrips) {
  for (const auto& s : load_gtfs(archive(toy_feed()))) {
    for (int h = 0; h < 24; ++h) EXPECT_LE(s.directions_at_hour[h], s.trips_at_hour[h]);
  }
}

TEST(Gtfs, LoadErrors) {
  ZipEntries missing = toy_feed();
  missing.erase(missing.begin() + 1);
  EXPECT_THROW(load_gtfs(archive(missing)), Error);
  ZipEntries bad_time = toy_feed();
  bad_time[2].second = replace_once(bad_time[2].second, "08:00:00", "8am");
  try {
    load_gtfs(archive(bad_time));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::MalformedInput);
  }
}

TEST(GtfsValidate, CleanFeedHasNoMessages) { EXPECT_TRUE(validate_gtfs(archive(toy_feed())).empty()); }

TEST(GtfsValidate, MissingTripsNamesTheFile) {
  ZipEntries e = toy_feed();
  e.erase(e.begin() + 1);
  const auto msgs = validate_gtfs(archive(e));
  ASSERT_EQ(msgs.size(), 1u);
  EXPECT_EQ(msgs[0].issue, GtfsIssue::MissingFile);
  EXPECT_EQ(msgs[0].file, "trips.txt");
}

TEST(GtfsValidate, SeededDefectsExactly) {
  const auto a = validate_gtfs(archive(toy_feed_unknown_stop()));
  ASSERT_EQ(a.size(), 1u);
  EXPECT_EQ(a[0].issue, GtfsIssue::UnknownStop);
  const auto b = validate_gtfs(archive(toy_feed_duplicate_stop()));
  ASSERT_EQ(b.size(), 1u);
  EXPECT_EQ(b[0].issue, GtfsIssue::DuplicateId);
  const auto c = validate_gtfs(archive(toy_feed_bad_sequence()));
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c[0].issue, GtfsIssue::NonMonotoneSequence);
}

TEST(GtfsValidate, UnreadableArchiveIsReported) {
  TempDir dir;
  write_file(dir.file("bad.zip"), "garbage");
  const auto msgs = validate_gtfs(dir.file("bad.zip"));
  ASSERT_EQ(msgs.size(), 1u);
  EXPECT_EQ(msgs[0].issue, GtfsIssue::UnreadableArchive);
}

TEST(Gtfs, StopFeaturesRoundTrip) {
  const auto stops = load_gtfs(archive(toy_feed()));
  const FeatureCollection fc = stops_to_features(stops);
  ASSERT_EQ(fc.size(), 3u);
  EXPECT_EQ(fc[0].tags.size(), 48u);
  EXPECT_EQ(fc[0].tags.at("trips_h08"), "3");
  EXPECT_EQ(stops_from_features(fc), stops);
  EXPECT_EQ(gtfs_offer_columns().front(), "trips_h00");
  EXPECT_EQ(gtfs_offer_columns().back(), "directions_h23");
}
