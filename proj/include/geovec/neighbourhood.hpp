#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "geovec/regions.hpp"

namespace geovec {

// Undirected simple graph over region ids (no self-loops).
class NeighbourhoodGraph {
 public:
  explicit NeighbourhoodGraph(std::vector<std::string> nodes);

  void add_edge(const std::string& a, const std::string& b);

  const std::vector<std::string>& nodes() const { return nodes_; }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const;
  std::optional<std::size_t> index_of(const std::string& id) const;
  bool has_edge(const std::string& a, const std::string& b) const;
  bool has_edge(std::size_t a, std::size_t b) const;
  const std::vector<std::size_t>& neighbours(std::size_t i) const { return adjacency_[i]; }
  // (a, b) with a < b by id, sorted.
  std::vector<std::pair<std::string, std::string>> edges() const;

  // Nodes at exactly `k` hops from `center`. Throws UnknownRegion.
  std::set<std::string> ring(const std::string& center, int k) const;
  // BFS hop counts from `center`; -1 for unreachable nodes.
  std::vector<int> distances_from(std::size_t center) const;

 private:
  std::vector<std::string> nodes_;
  std::vector<std::vector<std::size_t>> adjacency_;
};

// Edge iff the region polygons intersect (shared edge or corner included).
NeighbourhoodGraph adjacency_neighbourhood(const RegionSet& regions);

// Edges between present cells at axial distance 1. Throws WrongMethod for
// non-hex region sets.
NeighbourhoodGraph hex_neighbourhood(const RegionSet& regions);

}  // namespace geovec
