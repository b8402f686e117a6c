#include <cmath>
#include <limits>

#include "geovec/analysis.hpp"
#include "geovec/error.hpp"
#include "geovec/io/csv.hpp"
#include "geovec/kernels.hpp"

namespace geovec {

namespace {

void copy_row(std::span<const double> src, std::span<double> dst) {
  std::copy(src.begin(), src.end(), dst.begin());
}

// Greedy D^2 seeding: each step samples 2 + floor(ln k) candidates and keeps
// the one that lowers the potential most.
nn::Matrix seed_centroids(const nn::Matrix& x, std::size_t k, Rng& rng) {
  const std::size_t n = x.rows();
  nn::Matrix c(k, x.cols());
  copy_row(x.row(static_cast<std::size_t>(rng.below(n))), c.row(0));
  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) d2[i] = kernels::squared_distance(x.row(i), c.row(0));
  const int trials = 2 + static_cast<int>(std::log(static_cast<double>(k)));
  for (std::size_t j = 1; j < k; ++j) {
    double total = 0.0;
    for (const double d : d2) total += d;
    std::size_t best = 0;
    double best_potential = std::numeric_limits<double>::infinity();
    for (int t = 0; t < trials; ++t) {
      std::size_t pick = 0;
      if (total > 0.0) {
        double target = rng.uniform01() * total;
        pick = n - 1;
        for (std::size_t i = 0; i < n; ++i) {
          target -= d2[i];
          if (target < 0.0) {
            pick = i;
            break;
          }
        }
      } else {
        pick = static_cast<std::size_t>(rng.below(n));
      }
      double potential = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        potential += std::min(d2[i], kernels::squared_distance(x.row(i), x.row(pick)));
      }
      if (potential < best_potential) {
        best_potential = potential;
        best = pick;
      }
    }
    copy_row(x.row(best), c.row(j));
    for (std::size_t i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], kernels::squared_distance(x.row(i), c.row(j)));
    }
  }
  return c;
}

double inertia_of(const nn::Matrix& x, const nn::Matrix& c, const std::vector<int>& labels) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    s += kernels::squared_distance(x.row(i), c.row(static_cast<std::size_t>(labels[i])));
  }
  return s;
}

}  // namespace

int nearest_centroid(std::span<const double> point, const nn::Matrix& centroids) {
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < centroids.rows(); ++j) {
    const double d = kernels::squared_distance(point, centroids.row(j));
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(j);
    }
  }
  return best;
}

ClusterAssignment kmeans(const EmbeddingMatrix& x, int k, std::uint64_t seed, int max_iter) {
  x.validate();
  const std::size_t n = x.values.rows();
  if (k < 1 || static_cast<std::size_t>(k) > n) {
    throw Error(ErrorKind::BadK, "k=" + std::to_string(k) + " with " + std::to_string(n) + " rows");
  }
  const auto kk = static_cast<std::size_t>(k);
  const std::size_t dims = x.values.cols();
  Rng rng(seed);
  ClusterAssignment out;
  out.region_ids = x.region_ids;
  out.centroids = seed_centroids(x.values, kk, rng);
  out.labels.assign(n, -1);

  for (int iter = 0; iter < max_iter; ++iter) {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      const int l = nearest_centroid(x.values.row(i), out.centroids);
      if (l != out.labels[i]) {
        out.labels[i] = l;
        changed = true;
      }
    }
    if (!changed) break;
    out.iterations = iter + 1;

    nn::Matrix sums(kk, dims);
    std::vector<std::size_t> sizes(kk, 0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto l = static_cast<std::size_t>(out.labels[i]);
      kernels::axpy(1.0, x.values.row(i), sums.row(l));
      ++sizes[l];
    }
    for (std::size_t j = 0; j < kk; ++j) {
      if (sizes[j] == 0) continue;
      for (std::size_t c = 0; c < dims; ++c) out.centroids(j, c) = sums(j, c) / static_cast<double>(sizes[j]);
    }
    // Empty clusters take the point farthest from its current centroid.
    for (std::size_t j = 0; j < kk; ++j) {
      if (sizes[j] != 0) continue;
      std::size_t far = 0;
      double far_d = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (sizes[static_cast<std::size_t>(out.labels[i])] <= 1) continue;
        const double d = kernels::squared_distance(
            x.values.row(i), out.centroids.row(static_cast<std::size_t>(out.labels[i])));
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      --sizes[static_cast<std::size_t>(out.labels[far])];
      out.labels[far] = static_cast<int>(j);
      sizes[j] = 1;
      copy_row(x.values.row(far), out.centroids.row(j));
    }
    out.inertia_trace.push_back(inertia_of(x.values, out.centroids, out.labels));
  }
  out.inertia = inertia_of(x.values, out.centroids, out.labels);
  return out;
}

std::string ClusterAssignment::to_csv() const {
  std::string out = "region_id,cluster\n";
  for (std::size_t i = 0; i < region_ids.size(); ++i) {
    out += io::csv_escape(region_ids[i]) + "," + std::to_string(labels[i]) + "\n";
  }
  return out;
}

}  // namespace geovec
