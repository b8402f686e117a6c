#pragma once

#include <functional>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "geovec/rng.hpp"

namespace geovec::nn {

// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }
  bool all_finite() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// a (n x k) times b (k x m).
Matrix matmul(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& a);

enum class Activation { Identity, Relu, Sigmoid };

std::string_view to_string(Activation a);
std::optional<Activation> parse_activation(std::string_view text);
double sigmoid(double x);

struct DenseLayer {
  Matrix weights;  // in x out
  std::vector<double> bias;
  Activation activation = Activation::Identity;

  std::size_t in() const { return weights.rows(); }
  std::size_t out() const { return weights.cols(); }

  friend bool operator==(const DenseLayer&, const DenseLayer&) = default;
};

struct MlpGradients {
  std::vector<Matrix> weights;
  std::vector<std::vector<double>> bias;
  Matrix input;

  void add(const MlpGradients& other);
  std::vector<std::span<const double>> views() const;
};

// Activations recorded by a forward pass; input to backward().
struct ForwardTrace {
  std::vector<Matrix> activations;  // [0] is the input, back() the output
  const Matrix& output() const { return activations.back(); }
};

class Mlp {
 public:
  Mlp() = default;
  explicit Mlp(std::vector<DenseLayer> layers);

  // Glorot-uniform weights in +-sqrt(6 / (in + out)), zero bias. `dims`
  // holds input dim followed by each layer's output dim.
  static Mlp glorot(const std::vector<std::size_t>& dims, const std::vector<Activation>& acts,
                    Rng& rng);

  const std::vector<DenseLayer>& layers() const { return layers_; }
  std::size_t input_dim() const;
  std::size_t output_dim() const;
  std::size_t parameter_count() const;

  Matrix forward(const Matrix& x) const;
  ForwardTrace forward_trace(const Matrix& x) const;
  MlpGradients backward(const ForwardTrace& trace, const Matrix& grad_out) const;
  MlpGradients zero_gradients() const;

  std::vector<std::span<double>> parameters();
  // Leading `count` layers as a separate network.
  Mlp prefix(std::size_t count) const;
  bool all_finite() const;

  friend bool operator==(const Mlp&, const Mlp&) = default;

 private:
  std::vector<DenseLayer> layers_;
};

struct LossResult {
  double loss = 0.0;
  std::vector<double> grad;
};

// Mean of softplus(s) - y * s; gradient (sigmoid(s) - y) / n.
LossResult bce_logit_loss(std::span<const double> scores, std::span<const double> labels);

struct MatrixLoss {
  double loss = 0.0;
  Matrix grad;
};

// Mean squared error over all entries; gradient 2 (pred - target) / count.
MatrixLoss mse_loss(const Matrix& pred, const Matrix& target);

// Adaptive-moment optimizer state.
struct OptimizerState {
  long step = 0;
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  std::vector<std::vector<double>> first_moment;
  std::vector<std::vector<double>> second_moment;

  OptimizerState() = default;
  OptimizerState(const std::vector<std::size_t>& shapes, double learning_rate);
  static OptimizerState for_model(Mlp& model, double learning_rate);
};

// Bias-corrected update p -= lr * m_hat / (sqrt(v_hat) + eps).
void opt_step(OptimizerState& state, std::span<const std::span<double>> params,
              std::span<const std::span<const double>> grads);
void opt_step(OptimizerState& state, Mlp& model, const MlpGradients& grads);

using ScalarFunction = std::function<double(std::span<const double>)>;

// max_i |analytic_i - numeric_i| / max(1e-8, |analytic_i| + |numeric_i|)
// with central differences of step h.
double gradient_check(const ScalarFunction& f, std::span<const double> analytic,
                      std::span<const double> point, double h = 1e-6);

inline constexpr int kModelFormatVersion = 1;

struct ModelFile {
  std::string type;
  nlohmann::json metadata;
  Mlp model;
};

nlohmann::json model_to_json(const std::string& type, const Mlp& model,
                             const nlohmann::json& metadata);
ModelFile model_from_json(const nlohmann::json& doc);
void save_model(const std::string& type, const Mlp& model, const nlohmann::json& metadata,
                const std::string& path);
// Throws IoFailure, MalformedInput, VersionMismatch.
ModelFile load_model(const std::string& path);

}  // namespace geovec::nn
