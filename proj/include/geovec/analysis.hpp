#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "geovec/embedders.hpp"

namespace geovec {

struct ClusterAssignment {
  std::vector<std::string> region_ids;
  std::vector<int> labels;
  nn::Matrix centroids;  // k x dims
  double inertia = 0.0;
  int iterations = 0;
  // Inertia after every Lloyd update, for diagnostics.
  std::vector<double> inertia_trace;

  // Header `region_id,cluster`.
  std::string to_csv() const;
};

// k-means++ style greedy seeding from Rng(seed), then Lloyd iterations until
// labels stop changing or `max_iter`. Ties go to the lowest centroid index.
// Throws BadK unless 1 <= k <= rows.
ClusterAssignment kmeans(const EmbeddingMatrix& x, int k, std::uint64_t seed, int max_iter = 100);

// Index of the nearest centroid, ties to the lowest index.
int nearest_centroid(std::span<const double> point, const nn::Matrix& centroids);

struct RidgeModel {
  std::vector<std::string> columns;
  std::vector<double> coefficients;
  double intercept = 0.0;
  double lambda = 1.0;

  friend bool operator==(const RidgeModel&, const RidgeModel&) = default;
};

inline constexpr double kDefaultRidgeLambda = 1.0;
inline constexpr double kDefaultTestFraction = 0.2;

// Solves (Xc^T Xc + lambda I) b = Xc^T yc on centered data; the intercept is
// not penalized. Throws ShapeMismatch, SingularSystem.
RidgeModel ridge_fit(const EmbeddingMatrix& x, std::span<const double> y, double lambda);
// Throws ShapeMismatch when the column count differs.
std::vector<double> ridge_predict(const RidgeModel& m, const EmbeddingMatrix& x);

nlohmann::json ridge_to_json(const RidgeModel& m);
RidgeModel ridge_from_json(const nlohmann::json& doc);
void save_ridge(const RidgeModel& m, const std::string& path);
RidgeModel load_ridge(const std::string& path);

// Header `region_id,prediction`.
std::string predictions_to_csv(const std::vector<std::string>& region_ids,
                               std::span<const double> predictions);

// Deterministic shuffle then split; test size round(fraction * n) clamped to
// [1, n - 1]. Throws TooFew for fewer than 2 ids.
std::pair<std::vector<std::string>, std::vector<std::string>> train_test_split(
    const std::vector<std::string>& ids, double test_fraction, std::uint64_t seed);

}  // namespace geovec
