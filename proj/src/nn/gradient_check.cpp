#include <algorithm>
#include <cmath>

#include "geovec/error.hpp"
#include "geovec/nn.hpp"

namespace geovec::nn {

double gradient_check(const ScalarFunction& f, std::span<const double> analytic,
                      std::span<const double> point, double h) {
  if (analytic.size() != point.size()) {
    throw Error(ErrorKind::ShapeMismatch, "gradient and point differ in length");
  }
  std::vector<double> x(point.begin(), point.end());
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double saved = x[i];
    x[i] = saved + h;
    const double up = f(x);
    x[i] = saved - h;
    const double down = f(x);
    x[i] = saved;
    const double numeric = (up - down) / (2.0 * h);
    const double err = std::abs(analytic[i] - numeric) /
                       std::max(1e-8, std::abs(analytic[i]) + std::abs(numeric));
    worst = std::max(worst, err);
  }
  return worst;
}

}  // namespace geovec::nn
