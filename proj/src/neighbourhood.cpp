#include "geovec/neighbourhood.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include "geovec/error.hpp"
#include "geovec/join.hpp"

namespace geovec {

NeighbourhoodGraph::NeighbourhoodGraph(std::vector<std::string> nodes) : nodes_(std::move(nodes)) {
  std::sort(nodes_.begin(), nodes_.end());
  if (std::adjacent_find(nodes_.begin(), nodes_.end()) != nodes_.end()) {
    throw Error(ErrorKind::MalformedInput, "duplicate node in neighbourhood graph");
  }
  adjacency_.resize(nodes_.size());
}

std::optional<std::size_t> NeighbourhoodGraph::index_of(const std::string& id) const {
  const auto it = std::lower_bound(nodes_.begin(), nodes_.end(), id);
  if (it == nodes_.end() || *it != id) return std::nullopt;
  return static_cast<std::size_t>(it - nodes_.begin());
}

void NeighbourhoodGraph::add_edge(const std::string& a, const std::string& b) {
  const auto ia = index_of(a);
  const auto ib = index_of(b);
  if (!ia) throw Error(ErrorKind::UnknownRegion, "unknown region " + a);
  if (!ib) throw Error(ErrorKind::UnknownRegion, "unknown region " + b);
  if (*ia == *ib) return;
  const auto insert = [](std::vector<std::size_t>& list, std::size_t v) {
    const auto it = std::lower_bound(list.begin(), list.end(), v);
    if (it == list.end() || *it != v) list.insert(it, v);
  };
  insert(adjacency_[*ia], *ib);
  insert(adjacency_[*ib], *ia);
}

std::size_t NeighbourhoodGraph::edge_count() const {
  std::size_t n = 0;
  for (const auto& adj : adjacency_) n += adj.size();
  return n / 2;
}

bool NeighbourhoodGraph::has_edge(std::size_t a, std::size_t b) const {
  return std::binary_search(adjacency_[a].begin(), adjacency_[a].end(), b);
}

bool NeighbourhoodGraph::has_edge(const std::string& a, const std::string& b) const {
  const auto ia = index_of(a);
  const auto ib = index_of(b);
  return ia && ib && has_edge(*ia, *ib);
}

std::vector<std::pair<std::string, std::string>> NeighbourhoodGraph::edges() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    for (const std::size_t j : adjacency_[i]) {
      if (i < j) out.emplace_back(nodes_[i], nodes_[j]);
    }
  }
  return out;
}

std::vector<int> NeighbourhoodGraph::distances_from(std::size_t center) const {
  std::vector<int> dist(nodes_.size(), -1);
  std::deque<std::size_t> queue{center};
  dist[center] = 0;
  while (!queue.empty()) {
    const std::size_t u = queue.front();
    queue.pop_front();
    for (const std::size_t v : adjacency_[u]) {
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
    }
  }
  return dist;
}

std::set<std::string> NeighbourhoodGraph::ring(const std::string& center, int k) const {
  const auto c = index_of(center);
  if (!c) throw Error(ErrorKind::UnknownRegion, "unknown region " + center);
  if (k < 0) throw Error(ErrorKind::MalformedInput, "ring distance must be >= 0");
  const std::vector<int> dist = distances_from(*c);
  std::set<std::string> out;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (dist[i] == k) out.insert(nodes_[i]);
  }
  return out;
}

NeighbourhoodGraph adjacency_neighbourhood(const RegionSet& regions) {
  NeighbourhoodGraph graph(regions.ids());
  if (regions.empty()) return graph;
  std::vector<BBox> boxes;
  for (const auto& r : regions) boxes.push_back(r.geometry.bbox());
  const GridIndex grid(boxes, median_region_width(regions));
  for (std::size_t i = 0; i < regions.size(); ++i) {
    for (const std::size_t j : grid.candidates(boxes[i])) {
      if (j <= i || !boxes[i].intersects(boxes[j])) continue;
      if (polygons_intersect(regions[i].geometry, regions[j].geometry)) {
        graph.add_edge(regions[i].region_id, regions[j].region_id);
      }
    }
  }
  return graph;
}

NeighbourhoodGraph hex_neighbourhood(const RegionSet& regions) {
  if (regions.method() != RegionMethod::Hex) {
    throw Error(ErrorKind::WrongMethod, "hex neighbourhood needs a hex region set, got " +
                                            std::string(to_string(regions.method())));
  }
  NeighbourhoodGraph graph(regions.ids());
  std::map<HexCellId, std::string> cells;
  for (const auto& r : regions) {
    const auto cell = HexCellId::parse(r.region_id);
    if (!cell) throw Error(ErrorKind::MalformedInput, "not a hex cell id: " + r.region_id);
    cells.emplace(*cell, r.region_id);
  }
  static constexpr int kDirections[6][2] = {{1, 0}, {1, -1}, {0, -1}, {-1, 0}, {-1, 1}, {0, 1}};
  for (const auto& [cell, id] : cells) {
    for (const auto& d : kDirections) {
      const auto it = cells.find({cell.res, cell.q + d[0], cell.r + d[1]});
      if (it != cells.end()) graph.add_edge(id, it->second);
    }
  }
  return graph;
}

}  // namespace geovec
