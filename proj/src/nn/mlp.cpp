#include <cmath>

#include "geovec/error.hpp"
#include "geovec/kernels.hpp"
#include "geovec/nn.hpp"

namespace geovec::nn {

std::string_view to_string(Activation a) {
  switch (a) {
    case Activation::Identity: return "identity";
    case Activation::Relu: return "relu";
    case Activation::Sigmoid: return "sigmoid";
  }
  return "unknown";
}

std::optional<Activation> parse_activation(std::string_view text) {
  if (text == "identity") return Activation::Identity;
  if (text == "relu") return Activation::Relu;
  if (text == "sigmoid") return Activation::Sigmoid;
  return std::nullopt;
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

namespace {

void activate(Matrix& m, Activation a) {
  if (a == Activation::Identity) return;
  for (double& v : m.data()) v = a == Activation::Relu ? (v > 0.0 ? v : 0.0) : sigmoid(v);
}

}  // namespace

void MlpGradients::add(const MlpGradients& other) {
  if (other.weights.size() != weights.size()) {
    throw Error(ErrorKind::ShapeMismatch, "gradient sets differ in depth");
  }
  for (std::size_t l = 0; l < weights.size(); ++l) {
    kernels::axpy(1.0, other.weights[l].data(), weights[l].data());
    kernels::axpy(1.0, other.bias[l], bias[l]);
  }
}

std::vector<std::span<const double>> MlpGradients::views() const {
  std::vector<std::span<const double>> out;
  for (std::size_t l = 0; l < weights.size(); ++l) {
    out.push_back(weights[l].data());
    out.emplace_back(bias[l]);
  }
  return out;
}

Mlp::Mlp(std::vector<DenseLayer> layers) : layers_(std::move(layers)) {
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    if (layers_[l].bias.size() != layers_[l].out()) {
      throw Error(ErrorKind::ShapeMismatch, "bias length differs from layer width");
    }
    if (l > 0 && layers_[l - 1].out() != layers_[l].in()) {
      throw Error(ErrorKind::ShapeMismatch, "layer shapes do not chain");
    }
  }
}

Mlp Mlp::glorot(const std::vector<std::size_t>& dims, const std::vector<Activation>& acts,
                Rng& rng) {
  if (dims.size() < 2 || acts.size() + 1 != dims.size()) {
    throw Error(ErrorKind::ShapeMismatch, "need one activation per layer");
  }
  std::vector<DenseLayer> layers;
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    if (dims[l] == 0 || dims[l + 1] == 0) throw Error(ErrorKind::ShapeMismatch, "zero-width layer");
    DenseLayer layer{Matrix(dims[l], dims[l + 1]), std::vector<double>(dims[l + 1], 0.0), acts[l]};
    const double limit = std::sqrt(6.0 / static_cast<double>(dims[l] + dims[l + 1]));
    for (double& w : layer.weights.data()) w = rng.uniform(-limit, limit);
    layers.push_back(std::move(layer));
  }
  return Mlp(std::move(layers));
}

std::size_t Mlp::input_dim() const { return layers_.empty() ? 0 : layers_.front().in(); }
std::size_t Mlp::output_dim() const { return layers_.empty() ? 0 : layers_.back().out(); }

std::size_t Mlp::parameter_count() const {
  std::size_t n = 0;
  for (const auto& l : layers_) n += l.weights.data().size() + l.bias.size();
  return n;
}

ForwardTrace Mlp::forward_trace(const Matrix& x) const {
  if (layers_.empty()) throw Error(ErrorKind::ShapeMismatch, "empty network");
  if (x.cols() != input_dim()) {
    throw Error(ErrorKind::ShapeMismatch, "input has " + std::to_string(x.cols()) +
                                              " columns, network expects " +
                                              std::to_string(input_dim()));
  }
  ForwardTrace trace;
  trace.activations.reserve(layers_.size() + 1);
  trace.activations.push_back(x);
  for (const auto& layer : layers_) {
    const Matrix& in = trace.activations.back();
    Matrix out(in.rows(), layer.out());
    for (std::size_t i = 0; i < in.rows(); ++i) {
      auto dst = out.row(i);
      std::copy(layer.bias.begin(), layer.bias.end(), dst.begin());
      for (std::size_t k = 0; k < layer.in(); ++k) {
        kernels::axpy(in(i, k), layer.weights.row(k), dst);
      }
    }
    activate(out, layer.activation);
    trace.activations.push_back(std::move(out));
  }
  return trace;
}

Matrix Mlp::forward(const Matrix& x) const { return std::move(forward_trace(x).activations.back()); }

MlpGradients Mlp::zero_gradients() const {
  MlpGradients g;
  for (const auto& l : layers_) {
    g.weights.emplace_back(l.in(), l.out());
    g.bias.emplace_back(l.out(), 0.0);
  }
  return g;
}

MlpGradients Mlp::backward(const ForwardTrace& trace, const Matrix& grad_out) const {
  if (trace.activations.size() != layers_.size() + 1) {
    throw Error(ErrorKind::ShapeMismatch, "trace does not belong to this network");
  }
  const Matrix& out = trace.output();
  if (grad_out.rows() != out.rows() || grad_out.cols() != out.cols()) {
    throw Error(ErrorKind::ShapeMismatch, "output gradient shape differs from output");
  }
  MlpGradients g = zero_gradients();
  Matrix upstream = grad_out;
  for (std::size_t l = layers_.size(); l-- > 0;) {
    const DenseLayer& layer = layers_[l];
    const Matrix& in = trace.activations[l];
    const Matrix& act = trace.activations[l + 1];
    Matrix dz = std::move(upstream);
    if (layer.activation == Activation::Relu) {
      for (std::size_t i = 0; i < dz.data().size(); ++i) {
        if (!(act.data()[i] > 0.0)) dz.data()[i] = 0.0;
      }
    } else if (layer.activation == Activation::Sigmoid) {
      for (std::size_t i = 0; i < dz.data().size(); ++i) {
        const double a = act.data()[i];
        dz.data()[i] *= a * (1.0 - a);
      }
    }
    Matrix dx(in.rows(), layer.in());
    for (std::size_t i = 0; i < in.rows(); ++i) {
      const auto dz_row = dz.row(i);
      kernels::axpy(1.0, dz_row, g.bias[l]);
      for (std::size_t k = 0; k < layer.in(); ++k) {
        kernels::axpy(in(i, k), dz_row, g.weights[l].row(k));
        dx(i, k) = kernels::dot(dz_row, layer.weights.row(k));
      }
    }
    upstream = std::move(dx);
  }
  g.input = std::move(upstream);
  return g;
}

std::vector<std::span<double>> Mlp::parameters() {
  std::vector<std::span<double>> out;
  for (auto& l : layers_) {
    out.push_back(l.weights.data());
    out.emplace_back(l.bias);
  }
  return out;
}

Mlp Mlp::prefix(std::size_t count) const {
  if (count == 0 || count > layers_.size()) {
    throw Error(ErrorKind::ShapeMismatch, "prefix length out of range");
  }
  return Mlp(std::vector<DenseLayer>(layers_.begin(), layers_.begin() + static_cast<long>(count)));
}

bool Mlp::all_finite() const {
  for (const auto& l : layers_) {
    if (!l.weights.all_finite()) return false;
    for (const double b : l.bias) {
      if (!std::isfinite(b)) return false;
    }
  }
  return true;
}

}  // namespace geovec::nn
