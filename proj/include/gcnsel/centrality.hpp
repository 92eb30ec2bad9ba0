#pragma once

#include <limits>
#include <vector>

#include "gcnsel/graph.hpp"

namespace gcnsel {

inline constexpr Index kUnreachable = std::numeric_limits<Index>::max();

struct DistanceVector {
  std::vector<Index> distances;  // kUnreachable outside the source's component
};

struct CentralityScores {
  std::vector<double> scores;
};

struct CentralityOptions {
  // Normalize by (component size - 1) instead of (num_nodes - 1).
  bool component_local_n = false;
  // Ignore nodes farther than this many hops; 0 means unbounded.
  Index max_radius = 0;
  // Worker threads for the per-source BFS sweep; 0 means hardware concurrency.
  unsigned threads = 0;
};

// Throws std::invalid_argument when source is out of range.
DistanceVector bfs_distances(const Graph& g, Index source);

/// Local reaching centrality of every node:
///
///   C(i) = 1/(N-1) * sum_{j : 0 < d(i,j) < inf} 1/d(i,j)
///
/// with N the node count of the whole graph (or of i's component with
/// component_local_n). Each source is an independent BFS; per-source sums are
/// accumulated level by level so results do not depend on the thread count.
/// Throws std::invalid_argument when the graph has fewer than two nodes.
CentralityScores local_reaching_centrality(const Graph& g,
                                           const CentralityOptions& opts = {});

}  // namespace gcnsel
