#include "geovec/join.hpp"

#include <algorithm>
#include <cmath>

#include "geovec/error.hpp"
#include "geovec/io/csv.hpp"

namespace geovec {

namespace {

constexpr long kMaxBuckets = 1L << 22;

}  // namespace

JointIndex::JointIndex(std::vector<JointPair> pairs) : pairs_(std::move(pairs)) {
  std::sort(pairs_.begin(), pairs_.end());
  pairs_.erase(std::unique(pairs_.begin(), pairs_.end()), pairs_.end());
}

bool JointIndex::contains(const std::string& region_id, const std::string& feature_id) const {
  return std::binary_search(pairs_.begin(), pairs_.end(), JointPair{region_id, feature_id});
}

std::string JointIndex::to_csv() const {
  std::string out = "region_id,feature_id\n";
  for (const auto& [r, f] : pairs_) {
    out += io::csv_escape(r);
    out += ',';
    out += io::csv_escape(f);
    out += '\n';
  }
  return out;
}

JointIndex JointIndex::parse_csv(std::string_view text) {
  const io::CsvTable t = io::CsvTable::parse(text);
  const auto rc = t.column("region_id");
  const auto fc = t.column("feature_id");
  if (!rc || !fc) {
    throw Error(ErrorKind::MalformedInput, "joint CSV needs region_id,feature_id columns");
  }
  std::vector<JointPair> pairs;
  for (std::size_t i = 0; i < t.rows().size(); ++i) {
    pairs.emplace_back(std::string(t.field(i, *rc)), std::string(t.field(i, *fc)));
  }
  return JointIndex(std::move(pairs));
}

void write_joint(const JointIndex& joint, const std::string& path) {
  io::write_file(path, joint.to_csv());
}

JointIndex load_joint(const std::string& path) { return JointIndex::parse_csv(io::read_file(path)); }

GridIndex::GridIndex(const std::vector<BBox>& boxes, double cell_size)
    : cell_(cell_size), box_count_(boxes.size()) {
  if (!(cell_ > 0.0) || !std::isfinite(cell_)) {
    throw Error(ErrorKind::MalformedInput, "grid cell size must be positive");
  }
  BBox extent = BBox::empty();
  for (const auto& b : boxes) extent.expand(b);
  if (extent.is_empty()) return;
  origin_lon_ = extent.min_lon;
  origin_lat_ = extent.min_lat;
  const auto dims = [&] {
    nx_ = static_cast<long>(std::floor(extent.width() / cell_)) + 1;
    ny_ = static_cast<long>(std::floor(extent.height() / cell_)) + 1;
  };
  dims();
  while (nx_ * ny_ > kMaxBuckets) {
    cell_ *= 2.0;
    dims();
  }
  buckets_.resize(static_cast<std::size_t>(nx_ * ny_));
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    const auto [x0, y0] = bucket(boxes[i].min_lon, boxes[i].min_lat);
    const auto [x1, y1] = bucket(boxes[i].max_lon, boxes[i].max_lat);
    for (long y = y0; y <= y1; ++y) {
      for (long x = x0; x <= x1; ++x) buckets_[static_cast<std::size_t>(y * nx_ + x)].push_back(i);
    }
  }
}

std::pair<long, long> GridIndex::bucket(double lon, double lat) const {
  const long x = static_cast<long>(std::floor((lon - origin_lon_) / cell_));
  const long y = static_cast<long>(std::floor((lat - origin_lat_) / cell_));
  return {std::clamp(x, 0L, nx_ - 1), std::clamp(y, 0L, ny_ - 1)};
}

std::vector<std::size_t> GridIndex::candidates(const BBox& query) const {
  std::vector<std::size_t> out;
  if (buckets_.empty() || query.is_empty()) return out;
  const double max_lon = origin_lon_ + cell_ * static_cast<double>(nx_);
  const double max_lat = origin_lat_ + cell_ * static_cast<double>(ny_);
  if (query.max_lon < origin_lon_ || query.max_lat < origin_lat_ || query.min_lon > max_lon ||
      query.min_lat > max_lat) {
    return out;
  }
  const auto [x0, y0] = bucket(query.min_lon, query.min_lat);
  const auto [x1, y1] = bucket(query.max_lon, query.max_lat);
  std::vector<char> seen(box_count_, 0);
  for (long y = y0; y <= y1; ++y) {
    for (long x = x0; x <= x1; ++x) {
      for (const std::size_t i : buckets_[static_cast<std::size_t>(y * nx_ + x)]) {
        if (!seen[i]) {
          seen[i] = 1;
          out.push_back(i);
        }
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

double median_region_width(const RegionSet& regions) {
  std::vector<double> widths;
  widths.reserve(regions.size());
  for (const auto& r : regions) widths.push_back(r.geometry.bbox().width());
  if (widths.empty()) return 0.0;
  const auto mid = widths.begin() + static_cast<long>(widths.size() / 2);
  std::nth_element(widths.begin(), mid, widths.end());
  return *mid;
}

JointIndex intersection_join(const RegionSet& regions, const FeatureCollection& features) {
  if (regions.empty()) throw Error(ErrorKind::EmptyRegions, "cannot join against zero regions");
  std::vector<BBox> boxes;
  boxes.reserve(regions.size());
  for (const auto& r : regions) boxes.push_back(r.geometry.bbox());
  const GridIndex grid(boxes, median_region_width(regions));

  std::vector<JointPair> pairs;
  for (const auto& f : features) {
    const BBox fb = bbox_of(f.geometry);
    for (const std::size_t i : grid.candidates(fb)) {
      if (!boxes[i].intersects(fb)) continue;
      if (intersects(f.geometry, regions[i].geometry)) {
        pairs.emplace_back(regions[i].region_id, f.feature_id);
      }
    }
  }
  return JointIndex(std::move(pairs));
}

void check_joint(const JointIndex& joint, const RegionSet& regions,
                 const FeatureCollection& features) {
  for (const auto& [r, f] : joint.pairs()) {
    if (!regions.index_of(r)) {
      throw Error(ErrorKind::InconsistentJoint, "joint references unknown region " + r);
    }
    if (features.find(f) == nullptr) {
      throw Error(ErrorKind::InconsistentJoint, "joint references unknown feature " + f);
    }
  }
}

}  // namespace geovec
