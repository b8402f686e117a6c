#include "geovec/error.hpp"
#include "geovec/io/csv.hpp"
#include "geovec/nn.hpp"

namespace geovec::nn {

using nlohmann::json;

json model_to_json(const std::string& type, const Mlp& model, const json& metadata) {
  json layers = json::array();
  for (const auto& l : model.layers()) {
    json weights = json::array();
    for (std::size_t r = 0; r < l.weights.rows(); ++r) {
      const auto row = l.weights.row(r);
      weights.push_back(std::vector<double>(row.begin(), row.end()));
    }
    layers.push_back({{"activation", to_string(l.activation)}, {"weights", weights}, {"bias", l.bias}});
  }
  return {{"format_version", kModelFormatVersion},
          {"type", type},
          {"metadata", metadata},
          {"layers", layers}};
}

ModelFile model_from_json(const json& doc) {
  if (!doc.is_object() || !doc.contains("format_version")) {
    throw Error(ErrorKind::MalformedInput, "model document has no format_version");
  }
  if (!doc["format_version"].is_number_integer() ||
      doc["format_version"].get<int>() != kModelFormatVersion) {
    throw Error(ErrorKind::VersionMismatch, "unsupported model format_version " +
                                                doc["format_version"].dump());
  }
  try {
    ModelFile out;
    out.type = doc.at("type").get<std::string>();
    out.metadata = doc.at("metadata");
    std::vector<DenseLayer> layers;
    for (const auto& l : doc.at("layers")) {
      const auto act = parse_activation(l.at("activation").get<std::string>());
      if (!act) throw Error(ErrorKind::MalformedInput, "unknown activation in model file");
      const auto& w = l.at("weights");
      const std::size_t in = w.size();
      const std::size_t outw = in ? w.at(0).size() : 0;
      DenseLayer layer{Matrix(in, outw), l.at("bias").get<std::vector<double>>(), *act};
      for (std::size_t r = 0; r < in; ++r) {
        const auto row = w.at(r).get<std::vector<double>>();
        if (row.size() != outw) throw Error(ErrorKind::MalformedInput, "ragged weight matrix");
        std::copy(row.begin(), row.end(), layer.weights.row(r).begin());
      }
      layers.push_back(std::move(layer));
    }
    if (layers.empty()) throw Error(ErrorKind::MalformedInput, "model has no layers");
    try {
      out.model = Mlp(std::move(layers));
    } catch (const Error& e) {
      throw Error(ErrorKind::MalformedInput, "inconsistent model shapes: " + e.detail());
    }
    return out;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::MalformedInput, std::string("bad model document: ") + e.what());
  }
}

void save_model(const std::string& type, const Mlp& model, const json& metadata,
                const std::string& path) {
  io::write_file(path, model_to_json(type, model, metadata).dump() + "\n");
}

ModelFile load_model(const std::string& path) {
  const std::string text = io::read_file(path);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::MalformedInput, std::string("model file parse error: ") + e.what());
  }
  return model_from_json(doc);
}

}  // namespace geovec::nn
