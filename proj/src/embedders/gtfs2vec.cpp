#include <algorithm>
#include <numeric>
#include <unordered_map>

#include "geovec/embedders.hpp"
#include "geovec/error.hpp"

namespace geovec {

namespace {

constexpr std::size_t kOfferWidth = 2 * io::kHoursPerDay;

}  // namespace

nn::Matrix gtfs_region_matrix(const RegionSet& regions, const std::vector<io::GtfsStopFeatures>& stops,
                              const JointIndex& joint) {
  std::unordered_map<std::string, const io::GtfsStopFeatures*> by_id;
  for (const auto& s : stops) by_id.emplace(s.stop_id, &s);
  nn::Matrix x(regions.size(), kOfferWidth);
  for (const auto& [rid, fid] : joint.pairs()) {
    const auto row = regions.index_of(rid);
    if (!row) throw Error(ErrorKind::InconsistentJoint, "joint references unknown region " + rid);
    const auto it = by_id.find(fid);
    if (it == by_id.end()) throw Error(ErrorKind::InconsistentJoint, "joint references unknown stop " + fid);
    for (int h = 0; h < io::kHoursPerDay; ++h) {
      x(*row, static_cast<std::size_t>(h)) += it->second->trips_at_hour[h];
      x(*row, static_cast<std::size_t>(io::kHoursPerDay + h)) += it->second->directions_at_hour[h];
    }
  }
  return x;
}

Gtfs2VecModel gtfs2vec_fit(const RegionSet& regions, const std::vector<io::GtfsStopFeatures>& stops,
                           const JointIndex& joint, const Gtfs2VecConfig& config,
                           Gtfs2VecTraining* training) {
  if (joint.empty()) throw Error(ErrorKind::EmptyJoint, "gtfs2vec needs at least one joined stop");
  if (config.latent < 1 || config.hidden < 1) {
    throw Error(ErrorKind::ShapeMismatch, "gtfs2vec latent and hidden sizes must be >= 1");
  }
  if (config.batch_size == 0 || config.epochs < 0) {
    throw Error(ErrorKind::MalformedInput, "invalid gtfs2vec training parameters");
  }
  const nn::Matrix raw = gtfs_region_matrix(regions, stops, joint);
  Gtfs2VecModel model;
  model.normalizer = MinMaxNormalizer::fit(raw);
  const nn::Matrix x = model.normalizer.apply(raw);

  Rng rng(config.seed);
  using nn::Activation;
  model.autoencoder = nn::Mlp::glorot(
      {kOfferWidth, config.hidden, config.latent, config.hidden, kOfferWidth},
      {Activation::Relu, Activation::Identity, Activation::Relu, Activation::Identity}, rng);
  nn::OptimizerState opt = nn::OptimizerState::for_model(model.autoencoder, config.lr);
  if (training != nullptr) {
    training->initial_loss = nn::mse_loss(model.autoencoder.forward(x), x).loss;
    training->epoch_losses.clear();
  }

  std::vector<std::size_t> order(x.rows());
  std::iota(order.begin(), order.end(), 0);
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(std::span<std::size_t>(order));
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t stop = std::min(order.size(), start + config.batch_size);
      nn::Matrix batch(stop - start, kOfferWidth);
      for (std::size_t i = start; i < stop; ++i) {
        const auto src = x.row(order[i]);
        std::copy(src.begin(), src.end(), batch.row(i - start).begin());
      }
      const nn::ForwardTrace trace = model.autoencoder.forward_trace(batch);
      const nn::MatrixLoss loss = nn::mse_loss(trace.output(), batch);
      nn::opt_step(opt, model.autoencoder, model.autoencoder.backward(trace, loss.grad));
    }
    if (!model.autoencoder.all_finite()) {
      throw Error(ErrorKind::NumericalFailure,
                  "gtfs2vec parameters became non-finite in epoch " + std::to_string(epoch));
    }
    if (training != nullptr) {
      training->epoch_losses.push_back(nn::mse_loss(model.autoencoder.forward(x), x).loss);
    }
  }
  return model;
}

EmbeddingMatrix gtfs2vec_transform(const Gtfs2VecModel& model, const RegionSet& regions,
                                   const std::vector<io::GtfsStopFeatures>& stops,
                                   const JointIndex& joint) {
  const nn::Matrix x = model.normalizer.apply(gtfs_region_matrix(regions, stops, joint));
  EmbeddingMatrix out;
  out.region_ids = regions.ids();
  out.values = model.encoder().forward(x);
  for (std::size_t i = 0; i < out.values.cols(); ++i) {
    out.columns.push_back("gtfs_emb_" + std::to_string(i));
  }
  return out;
}

}  // namespace geovec
