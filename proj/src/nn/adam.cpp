#include <cmath>

#include "geovec/error.hpp"
#include "geovec/nn.hpp"

namespace geovec::nn {

OptimizerState::OptimizerState(const std::vector<std::size_t>& shapes, double learning_rate)
    : lr(learning_rate) {
  for (const std::size_t n : shapes) {
    first_moment.emplace_back(n, 0.0);
    second_moment.emplace_back(n, 0.0);
  }
}

OptimizerState OptimizerState::for_model(Mlp& model, double learning_rate) {
  std::vector<std::size_t> shapes;
  for (const auto& p : model.parameters()) shapes.push_back(p.size());
  return OptimizerState(shapes, learning_rate);
}

void opt_step(OptimizerState& state, std::span<const std::span<double>> params,
              std::span<const std::span<const double>> grads) {
  if (params.size() != grads.size() || params.size() != state.first_moment.size()) {
    throw Error(ErrorKind::ShapeMismatch, "optimizer buffers do not mirror parameters");
  }
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double c1 = 1.0 - std::pow(state.beta1, t);
  const double c2 = 1.0 - std::pow(state.beta2, t);
  for (std::size_t b = 0; b < params.size(); ++b) {
    auto& m = state.first_moment[b];
    auto& v = state.second_moment[b];
    if (params[b].size() != m.size() || grads[b].size() != m.size()) {
      throw Error(ErrorKind::ShapeMismatch, "optimizer buffer length differs from parameter");
    }
    for (std::size_t i = 0; i < m.size(); ++i) {
      const double g = grads[b][i];
      m[i] = state.beta1 * m[i] + (1.0 - state.beta1) * g;
      v[i] = state.beta2 * v[i] + (1.0 - state.beta2) * g * g;
      const double m_hat = m[i] / c1;
      const double v_hat = v[i] / c2;
      params[b][i] -= state.lr * m_hat / (std::sqrt(v_hat) + state.eps);
    }
  }
}

void opt_step(OptimizerState& state, Mlp& model, const MlpGradients& grads) {
  const auto params = model.parameters();
  const auto views = grads.views();
  opt_step(state, params, views);
}

}  // namespace geovec::nn
