#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <set>

#include "geovec/embedders.hpp"
#include "geovec/error.hpp"
#include "geovec/io/csv.hpp"

namespace geovec {

void EmbeddingMatrix::validate() const {
  if (values.rows() != region_ids.size() || values.cols() != columns.size()) {
    throw Error(ErrorKind::ShapeMismatch, "embedding values do not match ids/columns");
  }
  if (std::set<std::string>(columns.begin(), columns.end()).size() != columns.size()) {
    throw Error(ErrorKind::MalformedInput, "duplicate embedding column names");
  }
  if (!values.all_finite()) throw Error(ErrorKind::NumericalFailure, "non-finite embedding value");
}

std::optional<std::size_t> EmbeddingMatrix::row_of(const std::string& region_id) const {
  const auto it = std::find(region_ids.begin(), region_ids.end(), region_id);
  if (it == region_ids.end()) return std::nullopt;
  return static_cast<std::size_t>(it - region_ids.begin());
}

std::string EmbeddingMatrix::to_csv() const {
  validate();
  std::vector<std::size_t> order(region_ids.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return region_ids[a] < region_ids[b]; });
  std::string out = "region_id";
  for (const auto& c : columns) out += "," + io::csv_escape(c);
  out += '\n';
  for (const std::size_t r : order) {
    out += io::csv_escape(region_ids[r]);
    for (const double v : values.row(r)) {
      out += ',';
      out += io::format_double(v);
    }
    out += '\n';
  }
  return out;
}

EmbeddingMatrix EmbeddingMatrix::parse_csv(std::string_view text) {
  const io::CsvTable t = io::CsvTable::parse(text);
  if (t.header().empty() || t.header().front() != "region_id") {
    throw Error(ErrorKind::MalformedInput, "embedding CSV must start with a region_id column");
  }
  EmbeddingMatrix m;
  m.columns.assign(t.header().begin() + 1, t.header().end());
  m.values = nn::Matrix(t.rows().size(), m.columns.size());
  for (std::size_t r = 0; r < t.rows().size(); ++r) {
    if (t.rows()[r].size() != t.header().size()) {
      throw Error(ErrorKind::MalformedInput, "embedding CSV row " + std::to_string(r + 2) +
                                                 " has the wrong field count");
    }
    m.region_ids.emplace_back(t.field(r, 0));
    for (std::size_t c = 0; c < m.columns.size(); ++c) {
      const std::string_view f = t.field(r, c + 1);
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
      if (f.empty() || ec != std::errc() || ptr != f.data() + f.size() || !std::isfinite(v)) {
        throw Error(ErrorKind::MalformedInput, "invalid number '" + std::string(f) +
                                                   "' in embedding CSV");
      }
      m.values(r, c) = v;
    }
  }
  if (std::set<std::string>(m.region_ids.begin(), m.region_ids.end()).size() != m.region_ids.size()) {
    throw Error(ErrorKind::MalformedInput, "duplicate region_id in embedding CSV");
  }
  m.validate();
  return m;
}

void write_embeddings(const EmbeddingMatrix& m, const std::string& path) {
  io::write_file(path, m.to_csv());
}

EmbeddingMatrix load_embeddings(const std::string& path) {
  return EmbeddingMatrix::parse_csv(io::read_file(path));
}

MinMaxNormalizer MinMaxNormalizer::fit(const nn::Matrix& x) {
  MinMaxNormalizer n;
  n.min.assign(x.cols(), 0.0);
  n.max.assign(x.cols(), 0.0);
  for (std::size_t c = 0; c < x.cols(); ++c) {
    if (x.rows() == 0) break;
    double lo = x(0, c);
    double hi = x(0, c);
    for (std::size_t r = 1; r < x.rows(); ++r) {
      lo = std::min(lo, x(r, c));
      hi = std::max(hi, x(r, c));
    }
    n.min[c] = lo;
    n.max[c] = hi;
  }
  return n;
}

nn::Matrix MinMaxNormalizer::apply(const nn::Matrix& x) const {
  if (x.cols() != min.size()) {
    throw Error(ErrorKind::ShapeMismatch, "normalizer fitted on a different width");
  }
  nn::Matrix out(x.rows(), x.cols());
  for (std::size_t c = 0; c < x.cols(); ++c) {
    const double range = max[c] - min[c];
    for (std::size_t r = 0; r < x.rows(); ++r) {
      out(r, c) = range > 0.0 ? (x(r, c) - min[c]) / range : 0.0;
    }
  }
  return out;
}

}  // namespace geovec
