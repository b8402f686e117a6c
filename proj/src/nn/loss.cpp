#include <cmath>

#include "geovec/error.hpp"
#include "geovec/nn.hpp"

namespace geovec::nn {

LossResult bce_logit_loss(std::span<const double> scores, std::span<const double> labels) {
  if (scores.size() != labels.size()) {
    throw Error(ErrorKind::ShapeMismatch, "scores and labels differ in length");
  }
  LossResult out;
  out.grad.resize(scores.size());
  if (scores.empty()) return out;
  const double n = static_cast<double>(scores.size());
  double total = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const double s = scores[i];
    const double softplus = std::max(s, 0.0) + std::log1p(std::exp(-std::abs(s)));
    total += softplus - labels[i] * s;
    out.grad[i] = (sigmoid(s) - labels[i]) / n;
  }
  out.loss = total / n;
  return out;
}

MatrixLoss mse_loss(const Matrix& pred, const Matrix& target) {
  if (pred.rows() != target.rows() || pred.cols() != target.cols()) {
    throw Error(ErrorKind::ShapeMismatch, "prediction and target shapes differ");
  }
  MatrixLoss out{0.0, Matrix(pred.rows(), pred.cols())};
  const std::size_t count = pred.data().size();
  if (count == 0) return out;
  const double n = static_cast<double>(count);
  double total = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const double d = pred.data()[i] - target.data()[i];
    total += d * d;
    out.grad.data()[i] = 2.0 * d / n;
  }
  out.loss = total / n;
  return out;
}

}  // namespace geovec::nn
