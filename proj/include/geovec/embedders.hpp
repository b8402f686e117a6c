#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "geovec/features.hpp"
#include "geovec/io/gtfs.hpp"
#include "geovec/join.hpp"
#include "geovec/neighbourhood.hpp"
#include "geovec/nn.hpp"
#include "geovec/regions.hpp"

namespace geovec {

// Regions x dimensions with named columns.
struct EmbeddingMatrix {
  std::vector<std::string> region_ids;
  std::vector<std::string> columns;
  nn::Matrix values;

  // Throws ShapeMismatch / MalformedInput when the invariants do not hold.
  void validate() const;
  std::optional<std::size_t> row_of(const std::string& region_id) const;

  // region_id then the named columns, rows sorted by region_id, 17
  // significant digits.
  std::string to_csv() const;
  static EmbeddingMatrix parse_csv(std::string_view text);

  friend bool operator==(const EmbeddingMatrix&, const EmbeddingMatrix&) = default;
};

void write_embeddings(const EmbeddingMatrix& m, const std::string& path);
EmbeddingMatrix load_embeddings(const std::string& path);

// ---- count embedders -------------------------------------------------------

// Sorted "key=value" columns. Keys with an empty accepted list expand to the
// values observed in `features`.
std::vector<std::string> count_columns(const TagFilter& filter, const FeatureCollection& features);
// Inverse of count_columns: one accepted value per column.
TagFilter filter_from_columns(const std::vector<std::string>& columns);

EmbeddingMatrix count_embed(const RegionSet& regions, const FeatureCollection& features,
                            const JointIndex& joint, const TagFilter& filter);
EmbeddingMatrix count_embed(const RegionSet& regions, const FeatureCollection& features,
                            const JointIndex& joint, const std::vector<std::string>& columns);

// Per region, the mean count row over ring(r, d) for d = 0..k, concatenated;
// columns suffixed "_d{d}". Empty rings give zero blocks.
EmbeddingMatrix contextual_count_embed(const RegionSet& regions, const FeatureCollection& features,
                                       const JointIndex& joint, const TagFilter& filter,
                                       const NeighbourhoodGraph& graph, int k);

// Per-column min-max scaling frozen at fit time; constant columns map to 0.
struct MinMaxNormalizer {
  std::vector<double> min;
  std::vector<double> max;

  static MinMaxNormalizer fit(const nn::Matrix& x);
  nn::Matrix apply(const nn::Matrix& x) const;

  friend bool operator==(const MinMaxNormalizer&, const MinMaxNormalizer&) = default;
};

// ---- hex2vec ---------------------------------------------------------------

struct Hex2VecConfig {
  std::vector<std::size_t> sizes{42, 13};
  int epochs = 10;
  std::size_t batch_size = 64;
  int negatives_per_positive = 4;
  double lr = 1e-3;
  std::uint64_t seed = 42;
};

struct Hex2VecModel {
  std::vector<std::string> columns;
  MinMaxNormalizer normalizer;
  nn::Mlp encoder;

  friend bool operator==(const Hex2VecModel&, const Hex2VecModel&) = default;
};

// Contrastive neighbour training: adjacent pairs are positives, uniformly
// drawn non-adjacent ordered pairs negatives; logit = dot of encodings.
// `epoch_losses`, when given, receives the mean batch loss of every epoch.
Hex2VecModel hex2vec_fit(const RegionSet& regions, const EmbeddingMatrix& counts,
                         const NeighbourhoodGraph& graph, const Hex2VecConfig& config,
                         std::vector<double>* epoch_losses = nullptr);

// Columns missing from `counts` are zero-filled; unknown columns raise
// ColumnMismatch.
EmbeddingMatrix hex2vec_transform(const Hex2VecModel& model, const EmbeddingMatrix& counts);

// ---- gtfs2vec --------------------------------------------------------------

struct Gtfs2VecConfig {
  std::size_t latent = 16;
  std::size_t hidden = 32;
  int epochs = 20;
  std::size_t batch_size = 64;
  double lr = 1e-3;
  std::uint64_t seed = 42;
};

struct Gtfs2VecModel {
  MinMaxNormalizer normalizer;
  // 48 -> hidden -> latent -> hidden -> 48; the first two layers encode.
  nn::Mlp autoencoder;

  static constexpr std::size_t kEncoderDepth = 2;
  nn::Mlp encoder() const { return autoencoder.prefix(kEncoderDepth); }
  std::size_t latent() const { return autoencoder.layers()[kEncoderDepth - 1].out(); }

  friend bool operator==(const Gtfs2VecModel&, const Gtfs2VecModel&) = default;
};

struct Gtfs2VecTraining {
  double initial_loss = 0.0;
  std::vector<double> epoch_losses;
};

// Region rows of summed trips_at_hour and directions_at_hour over member stops
// (joint feature ids are stop ids).
nn::Matrix gtfs_region_matrix(const RegionSet& regions, const std::vector<io::GtfsStopFeatures>& stops,
                              const JointIndex& joint);

Gtfs2VecModel gtfs2vec_fit(const RegionSet& regions, const std::vector<io::GtfsStopFeatures>& stops,
                           const JointIndex& joint, const Gtfs2VecConfig& config,
                           Gtfs2VecTraining* training = nullptr);
EmbeddingMatrix gtfs2vec_transform(const Gtfs2VecModel& model, const RegionSet& regions,
                                   const std::vector<io::GtfsStopFeatures>& stops,
                                   const JointIndex& joint);

// ---- persistence -----------------------------------------------------------

using EmbedderModel = std::variant<Hex2VecModel, Gtfs2VecModel>;

void save_embedder(const Hex2VecModel& model, const std::string& path);
void save_embedder(const Gtfs2VecModel& model, const std::string& path);
// Type tag checked: loading the other kind raises MalformedInput.
Hex2VecModel load_hex2vec(const std::string& path);
Gtfs2VecModel load_gtfs2vec(const std::string& path);
EmbedderModel load_embedder(const std::string& path);

}  // namespace geovec
