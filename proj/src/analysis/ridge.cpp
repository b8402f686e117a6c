#include <cmath>

#include "geovec/analysis.hpp"
#include "geovec/error.hpp"
#include "geovec/io/csv.hpp"

namespace geovec {

using nlohmann::json;

namespace {

// Solves a x = b in place by Gaussian elimination with partial pivoting.
std::vector<double> solve(nn::Matrix a, std::vector<double> b) {
  const std::size_t n = b.size();
  double scale = 0.0;
  for (const double v : a.data()) scale = std::max(scale, std::abs(v));
  const double tiny = 1e-12 * std::max(scale, 1.0);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
    }
    if (std::abs(a(pivot, col)) <= tiny) {
      throw Error(ErrorKind::SingularSystem, "normal equations are singular at column " + std::to_string(col));
    }
    if (pivot != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a(col, c), a(pivot, c));
      std::swap(b[col], b[pivot]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a(r, col) / a(col, col);
      if (f == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) a(r, c) -= f * a(col, c);
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t c = i + 1; c < n; ++c) s -= a(i, c) * x[c];
    x[i] = s / a(i, i);
  }
  return x;
}

}  // namespace

RidgeModel ridge_fit(const EmbeddingMatrix& x, std::span<const double> y, double lambda) {
  x.validate();
  const std::size_t n = x.values.rows();
  const std::size_t d = x.values.cols();
  if (y.size() != n) throw Error(ErrorKind::ShapeMismatch, "target count does not match rows");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorKind::MalformedInput, "lambda must be a finite value >= 0");
  }
  if (n == 0) throw Error(ErrorKind::TooFew, "ridge needs at least one row");

  std::vector<double> mean_x(d, 0.0);
  double mean_y = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < d; ++c) mean_x[c] += x.values(i, c);
    mean_y += y[i];
  }
  for (double& m : mean_x) m /= static_cast<double>(n);
  mean_y /= static_cast<double>(n);

  nn::Matrix gram(d, d);
  std::vector<double> rhs(d, 0.0);
  std::vector<double> row(d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < d; ++c) row[c] = x.values(i, c) - mean_x[c];
    const double yc = y[i] - mean_y;
    for (std::size_t a = 0; a < d; ++a) {
      rhs[a] += row[a] * yc;
      for (std::size_t b = 0; b < d; ++b) gram(a, b) += row[a] * row[b];
    }
  }
  for (std::size_t a = 0; a < d; ++a) gram(a, a) += lambda;

  RidgeModel m;
  m.columns = x.columns;
  m.lambda = lambda;
  m.coefficients = d == 0 ? std::vector<double>{} : solve(gram, rhs);
  m.intercept = mean_y;
  for (std::size_t c = 0; c < d; ++c) m.intercept -= m.coefficients[c] * mean_x[c];
  for (const double v : m.coefficients) {
    if (!std::isfinite(v)) throw Error(ErrorKind::SingularSystem, "non-finite ridge coefficients");
  }
  return m;
}

std::vector<double> ridge_predict(const RidgeModel& m, const EmbeddingMatrix& x) {
  x.validate();
  if (x.values.cols() != m.coefficients.size()) {
    throw Error(ErrorKind::ShapeMismatch, "model expects " + std::to_string(m.coefficients.size()) +
                                              " columns, got " + std::to_string(x.values.cols()));
  }
  std::vector<double> out(x.values.rows());
  for (std::size_t i = 0; i < out.size(); ++i) {
    double s = m.intercept;
    for (std::size_t c = 0; c < m.coefficients.size(); ++c) s += x.values(i, c) * m.coefficients[c];
    out[i] = s;
  }
  return out;
}

json ridge_to_json(const RidgeModel& m) {
  return {{"format_version", nn::kModelFormatVersion},
          {"type", "ridge"},
          {"columns", m.columns},
          {"coefficients", m.coefficients},
          {"intercept", m.intercept},
          {"lambda", m.lambda}};
}

RidgeModel ridge_from_json(const json& doc) {
  try {
    if (doc.at("format_version").get<int>() != nn::kModelFormatVersion) {
      throw Error(ErrorKind::VersionMismatch, "unsupported ridge model version");
    }
    if (doc.at("type").get<std::string>() != "ridge") {
      throw Error(ErrorKind::MalformedInput, "not a ridge model file");
    }
    RidgeModel m;
    m.columns = doc.at("columns").get<std::vector<std::string>>();
    m.coefficients = doc.at("coefficients").get<std::vector<double>>();
    m.intercept = doc.at("intercept").get<double>();
    m.lambda = doc.at("lambda").get<double>();
    if (m.columns.size() != m.coefficients.size()) {
      throw Error(ErrorKind::MalformedInput, "ridge columns and coefficients differ in length");
    }
    return m;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::MalformedInput, std::string("bad ridge model: ") + e.what());
  }
}

void save_ridge(const RidgeModel& m, const std::string& path) {
  io::write_file(path, ridge_to_json(m).dump(2) + "\n");
}

RidgeModel load_ridge(const std::string& path) {
  const std::string text = io::read_file(path);
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) throw Error(ErrorKind::MalformedInput, "ridge model is not valid JSON: " + path);
  return ridge_from_json(doc);
}

std::string predictions_to_csv(const std::vector<std::string>& region_ids,
                               std::span<const double> predictions) {
  std::string out = "region_id,prediction\n";
  for (std::size_t i = 0; i < region_ids.size(); ++i) {
    out += io::csv_escape(region_ids[i]) + "," + io::format_double(predictions[i]) + "\n";
  }
  return out;
}

}  // namespace geovec
