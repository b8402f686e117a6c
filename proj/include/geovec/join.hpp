#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "geovec/features.hpp"
#include "geovec/regions.hpp"

namespace geovec {

using JointPair = std::pair<std::string, std::string>;  // (region_id, feature_id)

// Canonical (sorted, duplicate-free) set of region/feature pairs.
class JointIndex {
 public:
  JointIndex() = default;
  explicit JointIndex(std::vector<JointPair> pairs);

  const std::vector<JointPair>& pairs() const { return pairs_; }
  std::size_t size() const { return pairs_.size(); }
  bool empty() const { return pairs_.empty(); }
  bool contains(const std::string& region_id, const std::string& feature_id) const;

  // Header `region_id,feature_id`, rows in sorted order.
  std::string to_csv() const;
  static JointIndex parse_csv(std::string_view text);

  friend bool operator==(const JointIndex&, const JointIndex&) = default;

 private:
  std::vector<JointPair> pairs_;
};

void write_joint(const JointIndex& joint, const std::string& path);
JointIndex load_joint(const std::string& path);

// Uniform bucket grid over bounding boxes.
class GridIndex {
 public:
  GridIndex(const std::vector<BBox>& boxes, double cell_size);

  double cell_size() const { return cell_; }
  // Indices of boxes whose buckets overlap `query`, ascending. Candidates
  // only: callers still run the exact predicate.
  std::vector<std::size_t> candidates(const BBox& query) const;

 private:
  std::pair<long, long> bucket(double lon, double lat) const;

  double cell_;
  double origin_lon_ = 0.0;
  double origin_lat_ = 0.0;
  long nx_ = 0;
  long ny_ = 0;
  std::vector<std::vector<std::size_t>> buckets_;
  std::size_t box_count_ = 0;
};

// Median width of the region bboxes.
double median_region_width(const RegionSet& regions);

// (r, f) present iff f intersects r under closed-set semantics. Throws
// EmptyRegions.
JointIndex intersection_join(const RegionSet& regions, const FeatureCollection& features);

// Checks that every pair names a known region and feature; throws
// InconsistentJoint otherwise.
void check_joint(const JointIndex& joint, const RegionSet& regions,
                 const FeatureCollection& features);

}  // namespace geovec
