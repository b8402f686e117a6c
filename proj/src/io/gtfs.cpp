#include "geovec/io/gtfs.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <map>
#include <set>
#include <unordered_map>

#include "geovec/error.hpp"
#include "geovec/io/csv.hpp"

namespace geovec::io {

namespace {

constexpr const char* kStops = "stops.txt";
constexpr const char* kTrips = "trips.txt";
constexpr const char* kStopTimes = "stop_times.txt";

const std::map<std::string, std::vector<std::string>>& required_columns() {
  static const std::map<std::string, std::vector<std::string>> cols = {
      {kStops, {"stop_id", "stop_lat", "stop_lon"}},
      {kTrips, {"trip_id", "route_id"}},
      {kStopTimes, {"trip_id", "stop_id", "stop_sequence", "departure_time"}},
  };
  return cols;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

template <typename T>
std::optional<T> parse_number(std::string_view text) {
  text = trim(text);
  T v{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
  return v;
}

struct Column {
  std::size_t index = 0;
  bool present = false;
};

Column column(const CsvTable& t, const std::string& name) {
  const auto c = t.column(name);
  return c ? Column{*c, true} : Column{};
}

std::string_view value(const CsvTable& t, std::size_t row, const Column& c) {
  return c.present ? trim(t.field(row, c.index)) : std::string_view();
}

CsvTable read_table(const ZipArchive& archive, const std::string& name) {
  if (!archive.contains(name)) {
    throw Error(ErrorKind::MalformedInput, "GTFS feed is missing " + name);
  }
  CsvTable t = CsvTable::parse(archive.read(name));
  for (const auto& col : required_columns().at(name)) {
    if (!t.column(col)) {
      throw Error(ErrorKind::MalformedInput, name + " is missing column " + col);
    }
  }
  return t;
}

// Departure time with arrival fallback; nullopt when both are empty.
std::optional<int> row_time(const CsvTable& t, std::size_t row, const Column& dep,
                            const Column& arr, bool* malformed) {
  *malformed = false;
  std::string_view text = value(t, row, dep);
  if (text.empty()) text = value(t, row, arr);
  if (text.empty()) return std::nullopt;
  const auto secs = parse_gtfs_time(text);
  if (!secs) *malformed = true;
  return secs;
}

}  // namespace

std::optional<int> parse_gtfs_time(std::string_view text) {
  text = trim(text);
  const auto c1 = text.find(':');
  if (c1 == std::string_view::npos || c1 == 0) return std::nullopt;
  const auto c2 = text.find(':', c1 + 1);
  if (c2 == std::string_view::npos || c2 - c1 != 3 || text.size() - c2 != 3) return std::nullopt;
  const auto h = parse_number<int>(text.substr(0, c1));
  const auto m = parse_number<int>(text.substr(c1 + 1, 2));
  const auto s = parse_number<int>(text.substr(c2 + 1, 2));
  if (!h || !m || !s || *h < 0 || *m < 0 || *m > 59 || *s < 0 || *s > 59) return std::nullopt;
  return *h * 3600 + *m * 60 + *s;
}

std::vector<GtfsStopFeatures> load_gtfs(const std::string& zip_path) {
  if (!std::filesystem::exists(zip_path)) {
    throw Error(ErrorKind::IoFailure, "no such file " + zip_path);
  }
  return load_gtfs(ZipArchive::open(zip_path));
}

std::vector<GtfsStopFeatures> load_gtfs(const ZipArchive& archive) {
  const CsvTable stops = read_table(archive, kStops);
  const CsvTable trips = read_table(archive, kTrips);
  const CsvTable times = read_table(archive, kStopTimes);

  std::vector<GtfsStopFeatures> out;
  std::unordered_map<std::string, std::size_t> stop_index;
  {
    const Column id = column(stops, "stop_id");
    const Column lat = column(stops, "stop_lat");
    const Column lon = column(stops, "stop_lon");
    for (std::size_t r = 0; r < stops.rows().size(); ++r) {
      GtfsStopFeatures s;
      s.stop_id = std::string(value(stops, r, id));
      const auto la = parse_number<double>(value(stops, r, lat));
      const auto lo = parse_number<double>(value(stops, r, lon));
      if (s.stop_id.empty() || !la || !lo || *la < -90 || *la > 90 || !std::isfinite(*lo)) {
        throw Error(ErrorKind::MalformedInput, "stops.txt row " + std::to_string(r + 2) +
                                                   " has an invalid id or location");
      }
      s.location = Coordinate::checked(*lo, *la);
      if (!stop_index.emplace(s.stop_id, out.size()).second) {
        throw Error(ErrorKind::MalformedInput, "duplicate stop_id " + s.stop_id);
      }
      out.push_back(std::move(s));
    }
  }

  std::unordered_map<std::string, std::string> headsign;
  {
    const Column id = column(trips, "trip_id");
    const Column sign = column(trips, "trip_headsign");
    for (std::size_t r = 0; r < trips.rows().size(); ++r) {
      headsign[std::string(value(trips, r, id))] = std::string(value(trips, r, sign));
    }
  }

  std::vector<std::array<std::set<std::string>, kHoursPerDay>> directions(out.size());
  const Column trip = column(times, "trip_id");
  const Column stop = column(times, "stop_id");
  const Column dep = column(times, "departure_time");
  const Column arr = column(times, "arrival_time");
  for (std::size_t r = 0; r < times.rows().size(); ++r) {
    const auto it = stop_index.find(std::string(value(times, r, stop)));
    bool malformed = false;
    const auto secs = row_time(times, r, dep, arr, &malformed);
    if (malformed) {
      throw Error(ErrorKind::MalformedInput,
                  "stop_times.txt row " + std::to_string(r + 2) + " has an unparseable time");
    }
    if (it == stop_index.end() || !secs) continue;
    const int hour = (*secs / 3600) % kHoursPerDay;
    ++out[it->second].trips_at_hour[hour];
    const auto hs = headsign.find(std::string(value(times, r, trip)));
    directions[it->second][hour].insert(hs == headsign.end() ? std::string() : hs->second);
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (int h = 0; h < kHoursPerDay; ++h) {
      out[i].directions_at_hour[h] = static_cast<int>(directions[i][h].size());
    }
  }
  return out;
}

std::vector<GtfsValidationMessage> validate_gtfs(const std::string& zip_path) {
  std::string bytes = read_file(zip_path);
  std::optional<ZipArchive> archive;
  try {
    archive = ZipArchive::from_bytes(std::move(bytes));
  } catch (const Error& e) {
    return {{GtfsIssue::UnreadableArchive, zip_path, e.detail()}};
  }
  return validate_gtfs(*archive);
}

std::vector<GtfsValidationMessage> validate_gtfs(const ZipArchive& archive) {
  std::vector<GtfsValidationMessage> msgs;
  std::map<std::string, CsvTable> tables;
  for (const auto& [file, cols] : required_columns()) {
    if (!archive.contains(file)) {
      msgs.push_back({GtfsIssue::MissingFile, file, "missing required file " + file});
      continue;
    }
    CsvTable t;
    try {
      t = CsvTable::parse(archive.read(file));
    } catch (const Error& e) {
      msgs.push_back({GtfsIssue::UnreadableArchive, file, e.detail()});
      continue;
    }
    bool complete = true;
    for (const auto& col : cols) {
      if (!t.column(col)) {
        msgs.push_back({GtfsIssue::MissingColumn, file, "missing required column " + col});
        complete = false;
      }
    }
    if (complete) tables.emplace(file, std::move(t));
  }

  std::set<std::string> stop_ids;
  const bool have_stops = tables.count(kStops) != 0;
  if (have_stops) {
    const CsvTable& t = tables.at(kStops);
    const Column id = column(t, "stop_id");
    const Column lat = column(t, "stop_lat");
    const Column lon = column(t, "stop_lon");
    for (std::size_t r = 0; r < t.rows().size(); ++r) {
      const std::string row = "row " + std::to_string(r + 2);
      const std::string sid(value(t, r, id));
      const auto la = parse_number<double>(value(t, r, lat));
      const auto lo = parse_number<double>(value(t, r, lon));
      if (sid.empty()) msgs.push_back({GtfsIssue::BadValue, kStops, row + ": empty stop_id"});
      if (!la || !lo || *la < -90 || *la > 90 || !std::isfinite(*lo)) {
        msgs.push_back({GtfsIssue::BadValue, kStops, row + ": invalid stop location"});
      }
      if (!sid.empty() && !stop_ids.insert(sid).second) {
        msgs.push_back({GtfsIssue::DuplicateId, kStops, row + ": duplicate stop_id " + sid});
      }
    }
  }

  std::set<std::string> trip_ids;
  const bool have_trips = tables.count(kTrips) != 0;
  if (have_trips) {
    const CsvTable& t = tables.at(kTrips);
    const Column id = column(t, "trip_id");
    for (std::size_t r = 0; r < t.rows().size(); ++r) trip_ids.insert(std::string(value(t, r, id)));
  }

  if (tables.count(kStopTimes) != 0) {
    const CsvTable& t = tables.at(kStopTimes);
    const Column trip = column(t, "trip_id");
    const Column stop = column(t, "stop_id");
    const Column seq = column(t, "stop_sequence");
    const Column dep = column(t, "departure_time");
    const Column arr = column(t, "arrival_time");
    std::unordered_map<std::string, long> last_sequence;
    for (std::size_t r = 0; r < t.rows().size(); ++r) {
      const std::string row = "row " + std::to_string(r + 2);
      const std::string tid(value(t, r, trip));
      const std::string sid(value(t, r, stop));
      if (have_stops && stop_ids.count(sid) == 0) {
        msgs.push_back({GtfsIssue::UnknownStop, kStopTimes, row + ": unknown stop_id " + sid});
      }
      if (have_trips && trip_ids.count(tid) == 0) {
        msgs.push_back({GtfsIssue::UnknownTrip, kStopTimes, row + ": unknown trip_id " + tid});
      }
      bool malformed = false;
      row_time(t, r, dep, arr, &malformed);
      if (malformed) {
        msgs.push_back({GtfsIssue::BadValue, kStopTimes, row + ": unparseable time"});
      }
      const auto s = parse_number<long>(value(t, r, seq));
      if (!s) {
        msgs.push_back({GtfsIssue::BadValue, kStopTimes, row + ": invalid stop_sequence"});
        continue;
      }
      const auto [it, first] = last_sequence.emplace(tid, *s);
      if (!first) {
        if (*s <= it->second) {
          msgs.push_back({GtfsIssue::NonMonotoneSequence, kStopTimes,
                          row + ": stop_sequence " + std::to_string(*s) +
                              " does not increase within trip " + tid});
        }
        it->second = *s;
      }
    }
  }
  return msgs;
}

}  // namespace geovec::io

namespace geovec::io {

const std::vector<std::string>& gtfs_offer_columns() {
  static const std::vector<std::string> cols = [] {
    std::vector<std::string> out;
    for (const char* prefix : {"trips_h", "directions_h"}) {
      for (int h = 0; h < kHoursPerDay; ++h) {
        out.push_back(prefix + std::string(h < 10 ? "0" : "") + std::to_string(h));
      }
    }
    return out;
  }();
  return cols;
}

FeatureCollection stops_to_features(const std::vector<GtfsStopFeatures>& stops) {
  const auto& cols = gtfs_offer_columns();
  FeatureCollection fc;
  for (const auto& s : stops) {
    Feature f{s.stop_id, s.location, {}};
    for (int h = 0; h < kHoursPerDay; ++h) {
      f.tags[cols[h]] = std::to_string(s.trips_at_hour[h]);
      f.tags[cols[kHoursPerDay + h]] = std::to_string(s.directions_at_hour[h]);
    }
    fc.add(std::move(f));
  }
  return fc;
}

std::vector<GtfsStopFeatures> stops_from_features(const FeatureCollection& features) {
  const auto& cols = gtfs_offer_columns();
  std::vector<GtfsStopFeatures> out;
  for (const auto& f : features) {
    const auto* point = std::get_if<Coordinate>(&f.geometry);
    if (point == nullptr) {
      throw Error(ErrorKind::MalformedInput, "stop feature " + f.feature_id + " is not a point");
    }
    GtfsStopFeatures s;
    s.stop_id = f.feature_id;
    s.location = *point;
    for (int i = 0; i < 2 * kHoursPerDay; ++i) {
      const auto it = f.tags.find(cols[i]);
      const auto v = it == f.tags.end() ? std::nullopt : parse_number<int>(it->second);
      if (!v || *v < 0) {
        throw Error(ErrorKind::MalformedInput,
                    "stop feature " + f.feature_id + " lacks a valid " + cols[i] + " tag");
      }
      (i < kHoursPerDay ? s.trips_at_hour[i] : s.directions_at_hour[i - kHoursPerDay]) = *v;
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace geovec::io
