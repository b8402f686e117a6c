#include <algorithm>
#include <map>

#include "geovec/embedders.hpp"
#include "geovec/error.hpp"
#include "geovec/kernels.hpp"

namespace geovec {

namespace {

struct PairSample {
  std::size_t left;
  std::size_t right;
  double label;
};

nn::Matrix gather_rows(const nn::Matrix& x, const std::vector<PairSample>& batch, bool left) {
  nn::Matrix out(batch.size(), x.cols());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const auto src = x.row(left ? batch[i].left : batch[i].right);
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  return out;
}

std::vector<nn::Activation> encoder_activations(std::size_t depth) {
  std::vector<nn::Activation> acts(depth, nn::Activation::Relu);
  acts.back() = nn::Activation::Identity;
  return acts;
}

}  // namespace

Hex2VecModel hex2vec_fit(const RegionSet& regions, const EmbeddingMatrix& counts,
                         const NeighbourhoodGraph& graph, const Hex2VecConfig& config,
                         std::vector<double>* epoch_losses) {
  counts.validate();
  if (config.sizes.empty()) throw Error(ErrorKind::ShapeMismatch, "hex2vec needs encoder sizes");
  if (config.batch_size == 0 || config.epochs < 0 || config.negatives_per_positive < 1) {
    throw Error(ErrorKind::MalformedInput, "invalid hex2vec training parameters");
  }
  if (counts.region_ids.size() != regions.size()) {
    throw Error(ErrorKind::ShapeMismatch, "count rows do not match the region set");
  }
  // Graph node i -> count row.
  std::vector<std::size_t> row_of_node(graph.node_count());
  for (std::size_t i = 0; i < graph.node_count(); ++i) {
    const auto row = counts.row_of(graph.nodes()[i]);
    if (!row) throw Error(ErrorKind::UnknownRegion, "graph node without counts: " + graph.nodes()[i]);
    row_of_node[i] = *row;
  }
  const std::size_t n = graph.node_count();
  const std::size_t edges = graph.edge_count();
  if (edges == 0) throw Error(ErrorKind::DegenerateGraph, "neighbourhood has no edges");
  if (n * (n - 1) <= 2 * edges) {
    throw Error(ErrorKind::DegenerateGraph, "no non-adjacent pairs available for negatives");
  }

  Hex2VecModel model;
  model.columns = counts.columns;
  model.normalizer = MinMaxNormalizer::fit(counts.values);
  const nn::Matrix x = model.normalizer.apply(counts.values);

  Rng rng(config.seed);
  std::vector<std::size_t> dims{counts.columns.size()};
  dims.insert(dims.end(), config.sizes.begin(), config.sizes.end());
  model.encoder = nn::Mlp::glorot(dims, encoder_activations(config.sizes.size()), rng);
  nn::OptimizerState opt = nn::OptimizerState::for_model(model.encoder, config.lr);

  std::vector<PairSample> positives;
  for (std::size_t a = 0; a < n; ++a) {
    for (const std::size_t b : graph.neighbours(a)) positives.push_back({row_of_node[a], row_of_node[b], 1.0});
  }

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::vector<PairSample> samples = positives;
    const std::size_t negatives = positives.size() * static_cast<std::size_t>(config.negatives_per_positive);
    for (std::size_t i = 0; i < negatives; ++i) {
      for (;;) {
        const auto a = static_cast<std::size_t>(rng.below(n));
        const auto b = static_cast<std::size_t>(rng.below(n));
        if (a == b || graph.has_edge(a, b)) continue;
        samples.push_back({row_of_node[a], row_of_node[b], 0.0});
        break;
      }
    }
    rng.shuffle(std::span<PairSample>(samples));

    double loss_sum = 0.0;
    std::size_t batches = 0;
    for (std::size_t start = 0; start < samples.size(); start += config.batch_size) {
      const std::vector<PairSample> batch(
          samples.begin() + static_cast<long>(start),
          samples.begin() + static_cast<long>(std::min(samples.size(), start + config.batch_size)));
      const nn::ForwardTrace left = model.encoder.forward_trace(gather_rows(x, batch, true));
      const nn::ForwardTrace right = model.encoder.forward_trace(gather_rows(x, batch, false));
      std::vector<double> scores(batch.size());
      std::vector<double> labels(batch.size());
      for (std::size_t i = 0; i < batch.size(); ++i) {
        scores[i] = kernels::dot(left.output().row(i), right.output().row(i));
        labels[i] = batch[i].label;
      }
      const nn::LossResult loss = nn::bce_logit_loss(scores, labels);
      nn::Matrix grad_left(batch.size(), model.encoder.output_dim());
      nn::Matrix grad_right(batch.size(), model.encoder.output_dim());
      for (std::size_t i = 0; i < batch.size(); ++i) {
        kernels::axpy(loss.grad[i], right.output().row(i), grad_left.row(i));
        kernels::axpy(loss.grad[i], left.output().row(i), grad_right.row(i));
      }
      nn::MlpGradients grads = model.encoder.backward(left, grad_left);
      grads.add(model.encoder.backward(right, grad_right));
      nn::opt_step(opt, model.encoder, grads);
      loss_sum += loss.loss;
      ++batches;
    }
    if (!model.encoder.all_finite()) {
      throw Error(ErrorKind::NumericalFailure,
                  "hex2vec parameters became non-finite in epoch " + std::to_string(epoch));
    }
    if (epoch_losses != nullptr) epoch_losses->push_back(loss_sum / static_cast<double>(batches));
  }
  return model;
}

EmbeddingMatrix hex2vec_transform(const Hex2VecModel& model, const EmbeddingMatrix& counts) {
  counts.validate();
  std::map<std::string, std::size_t> model_col;
  for (std::size_t i = 0; i < model.columns.size(); ++i) model_col.emplace(model.columns[i], i);
  std::vector<std::size_t> target(counts.columns.size());
  for (std::size_t c = 0; c < counts.columns.size(); ++c) {
    const auto it = model_col.find(counts.columns[c]);
    if (it == model_col.end()) {
      throw Error(ErrorKind::ColumnMismatch, "column '" + counts.columns[c] + "' unknown to the model");
    }
    target[c] = it->second;
  }
  nn::Matrix aligned(counts.values.rows(), model.columns.size());
  for (std::size_t r = 0; r < aligned.rows(); ++r) {
    for (std::size_t c = 0; c < target.size(); ++c) aligned(r, target[c]) = counts.values(r, c);
  }
  EmbeddingMatrix out;
  out.region_ids = counts.region_ids;
  out.values = model.encoder.forward(model.normalizer.apply(aligned));
  for (std::size_t i = 0; i < out.values.cols(); ++i) out.columns.push_back("emb_" + std::to_string(i));
  return out;
}

}  // namespace geovec
