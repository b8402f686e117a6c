#include <algorithm>
#include <map>
#include <set>

#include "geovec/embedders.hpp"
#include "geovec/error.hpp"

namespace geovec {

std::vector<std::string> count_columns(const TagFilter& filter, const FeatureCollection& features) {
  std::set<std::string> cols;
  for (const auto& [key, values] : filter.entries()) {
    if (!values.empty()) {
      for (const auto& v : values) cols.insert(key + "=" + v);
      continue;
    }
    for (const auto& f : features) {
      if (const auto it = f.tags.find(key); it != f.tags.end()) cols.insert(key + "=" + it->second);
    }
  }
  return {cols.begin(), cols.end()};
}

TagFilter filter_from_columns(const std::vector<std::string>& columns) {
  std::map<std::string, std::vector<std::string>> entries;
  for (const auto& c : columns) {
    const auto eq = c.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw Error(ErrorKind::MalformedInput, "count column is not key=value: " + c);
    }
    entries[c.substr(0, eq)].push_back(c.substr(eq + 1));
  }
  return TagFilter(std::move(entries));
}

EmbeddingMatrix count_embed(const RegionSet& regions, const FeatureCollection& features,
                            const JointIndex& joint, const std::vector<std::string>& columns) {
  check_joint(joint, regions, features);
  std::map<std::string, std::size_t> column_index;
  for (std::size_t i = 0; i < columns.size(); ++i) column_index.emplace(columns[i], i);

  EmbeddingMatrix m{regions.ids(), columns, nn::Matrix(regions.size(), columns.size())};
  for (const auto& [rid, fid] : joint.pairs()) {
    const std::size_t row = *regions.index_of(rid);
    for (const auto& [k, v] : features.find(fid)->tags) {
      if (const auto it = column_index.find(k + "=" + v); it != column_index.end()) {
        m.values(row, it->second) += 1.0;
      }
    }
  }
  return m;
}

EmbeddingMatrix count_embed(const RegionSet& regions, const FeatureCollection& features,
                            const JointIndex& joint, const TagFilter& filter) {
  return count_embed(regions, features, joint, count_columns(filter, features));
}

EmbeddingMatrix contextual_count_embed(const RegionSet& regions, const FeatureCollection& features,
                                       const JointIndex& joint, const TagFilter& filter,
                                       const NeighbourhoodGraph& graph, int k) {
  if (k < 0) throw Error(ErrorKind::MalformedInput, "context distance must be >= 0");
  const EmbeddingMatrix counts = count_embed(regions, features, joint, filter);
  const std::size_t width = counts.columns.size();

  // Graph index -> count row.
  std::vector<std::size_t> row_of_node(graph.node_count());
  for (std::size_t i = 0; i < graph.node_count(); ++i) {
    const auto row = regions.index_of(graph.nodes()[i]);
    if (!row) {
      throw Error(ErrorKind::UnknownRegion, "graph node " + graph.nodes()[i] + " is not a region");
    }
    row_of_node[i] = *row;
  }

  EmbeddingMatrix m;
  m.region_ids = counts.region_ids;
  for (int d = 0; d <= k; ++d) {
    for (const auto& c : counts.columns) m.columns.push_back(c + "_d" + std::to_string(d));
  }
  m.values = nn::Matrix(regions.size(), width * static_cast<std::size_t>(k + 1));
  for (std::size_t r = 0; r < regions.size(); ++r) {
    const auto node = graph.index_of(regions[r].region_id);
    if (!node) throw Error(ErrorKind::UnknownRegion, "region " + regions[r].region_id + " not in graph");
    const std::vector<int> dist = graph.distances_from(*node);
    std::vector<std::size_t> ring_size(static_cast<std::size_t>(k + 1), 0);
    auto out = m.values.row(r);
    for (std::size_t n = 0; n < dist.size(); ++n) {
      if (dist[n] < 0 || dist[n] > k) continue;
      const auto d = static_cast<std::size_t>(dist[n]);
      ++ring_size[d];
      const auto src = counts.values.row(row_of_node[n]);
      for (std::size_t c = 0; c < width; ++c) out[d * width + c] += src[c];
    }
    for (std::size_t d = 0; d <= static_cast<std::size_t>(k); ++d) {
      if (ring_size[d] == 0) continue;
      for (std::size_t c = 0; c < width; ++c) out[d * width + c] /= static_cast<double>(ring_size[d]);
    }
  }
  return m;
}

}  // namespace geovec
