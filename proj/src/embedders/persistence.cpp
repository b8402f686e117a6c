#include "geovec/embedders.hpp"
#include "geovec/error.hpp"

namespace geovec {

using nlohmann::json;

namespace {

constexpr const char* kHex2VecType = "hex2vec";
constexpr const char* kGtfs2VecType = "gtfs2vec";

json normalizer_json(const MinMaxNormalizer& n) { return {{"min", n.min}, {"max", n.max}}; }

MinMaxNormalizer normalizer_from(const json& j, std::size_t width) {
  MinMaxNormalizer n;
  n.min = j.at("min").get<std::vector<double>>();
  n.max = j.at("max").get<std::vector<double>>();
  if (n.min.size() != width || n.max.size() != width) {
    throw Error(ErrorKind::MalformedInput, "normalization stats do not match the model width");
  }
  return n;
}

nn::ModelFile load_typed(const std::string& path, const std::string& type) {
  nn::ModelFile file = nn::load_model(path);
  if (file.type != type) {
    throw Error(ErrorKind::MalformedInput,
                "model file holds a " + file.type + " embedder, expected " + type);
  }
  return file;
}

template <typename F>
auto metadata_guard(F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::MalformedInput, std::string("bad embedder metadata: ") + e.what());
  }
}

}  // namespace

void save_embedder(const Hex2VecModel& model, const std::string& path) {
  std::vector<std::size_t> sizes;
  for (const auto& l : model.encoder.layers()) sizes.push_back(l.out());
  const json meta = {{"columns", model.columns},
                     {"normalization", normalizer_json(model.normalizer)},
                     {"sizes", sizes}};
  nn::save_model(kHex2VecType, model.encoder, meta, path);
}

void save_embedder(const Gtfs2VecModel& model, const std::string& path) {
  const json meta = {{"columns", io::gtfs_offer_columns()},
                     {"normalization", normalizer_json(model.normalizer)},
                     {"latent", model.latent()},
                     {"encoder_depth", Gtfs2VecModel::kEncoderDepth}};
  nn::save_model(kGtfs2VecType, model.autoencoder, meta, path);
}

Hex2VecModel load_hex2vec(const std::string& path) {
  nn::ModelFile file = load_typed(path, kHex2VecType);
  return metadata_guard([&] {
    Hex2VecModel model;
    model.columns = file.metadata.at("columns").get<std::vector<std::string>>();
    model.encoder = std::move(file.model);
    if (model.encoder.input_dim() != model.columns.size()) {
      throw Error(ErrorKind::MalformedInput, "hex2vec columns do not match the encoder input");
    }
    model.normalizer = normalizer_from(file.metadata.at("normalization"), model.columns.size());
    return model;
  });
}

Gtfs2VecModel load_gtfs2vec(const std::string& path) {
  nn::ModelFile file = load_typed(path, kGtfs2VecType);
  return metadata_guard([&] {
    Gtfs2VecModel model;
    if (file.metadata.at("encoder_depth").get<std::size_t>() != Gtfs2VecModel::kEncoderDepth ||
        file.model.layers().size() != 2 * Gtfs2VecModel::kEncoderDepth ||
        file.model.input_dim() != 2 * io::kHoursPerDay) {
      throw Error(ErrorKind::MalformedInput, "unexpected gtfs2vec network layout");
    }
    model.autoencoder = std::move(file.model);
    model.normalizer = normalizer_from(file.metadata.at("normalization"), 2 * io::kHoursPerDay);
    return model;
  });
}

EmbedderModel load_embedder(const std::string& path) {
  const nn::ModelFile file = nn::load_model(path);
  if (file.type == kHex2VecType) return load_hex2vec(path);
  if (file.type == kGtfs2VecType) return load_gtfs2vec(path);
  throw Error(ErrorKind::MalformedInput, "unknown embedder type " + file.type);
}

}  // namespace geovec
