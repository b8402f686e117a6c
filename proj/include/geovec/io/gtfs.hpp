#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "geovec/geometry.hpp"
#include "geovec/io/zip.hpp"

namespace geovec::io {

inline constexpr int kHoursPerDay = 24;

// Hourly public transport offer at one stop.
struct GtfsStopFeatures {
  std::string stop_id;
  Coordinate location;
  std::array<int, kHoursPerDay> trips_at_hour{};
  std::array<int, kHoursPerDay> directions_at_hour{};

  friend bool operator==(const GtfsStopFeatures&, const GtfsStopFeatures&) = default;
};

// Seconds since service-day midnight for "H:MM:SS" (hours may exceed 23).
std::optional<int> parse_gtfs_time(std::string_view text);

// Stops in stops.txt order. departure_time picks the hour bucket (hours wrap
// modulo 24), falling back to arrival_time; rows with neither are skipped.
// Directions are distinct trip_headsign values per stop and hour.
std::vector<GtfsStopFeatures> load_gtfs(const std::string& zip_path);
std::vector<GtfsStopFeatures> load_gtfs(const ZipArchive& archive);

enum class GtfsIssue {
  UnreadableArchive,
  MissingFile,
  MissingColumn,
  DuplicateId,
  BadValue,
  UnknownStop,
  UnknownTrip,
  NonMonotoneSequence,
};

struct GtfsValidationMessage {
  GtfsIssue issue;
  std::string file;
  std::string text;

  std::string to_string() const { return file + ": " + text; }
};

// Content problems are reported, never thrown; only an unopenable path
// raises IoFailure.
std::vector<GtfsValidationMessage> validate_gtfs(const std::string& zip_path);
std::vector<GtfsValidationMessage> validate_gtfs(const ZipArchive& archive);

}  // namespace geovec::io

#include "geovec/features.hpp"

namespace geovec::io {

// Tag names of the 48-entry offer vector: trips_h00..trips_h23 followed by
// directions_h00..directions_h23.
const std::vector<std::string>& gtfs_offer_columns();

// Stops as point features (id = stop_id) carrying the 48 offer tags, and back.
FeatureCollection stops_to_features(const std::vector<GtfsStopFeatures>& stops);
std::vector<GtfsStopFeatures> stops_from_features(const FeatureCollection& features);

}  // namespace geovec::io
