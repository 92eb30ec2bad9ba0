#include "gcnsel/centrality.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <thread>

namespace gcnsel {
namespace {

// Writes the reachable-node count per BFS level into level_counts
// (index 0 = the source itself) and returns it.
const std::vector<Index>& bfs_levels(const Graph& g, Index source, Index max_radius,
                                     std::vector<Index>& dist,
                                     std::vector<Index>& frontier,
                                     std::vector<Index>& next,
                                     std::vector<Index>& touched,
                                     std::vector<Index>& level_counts) {
  level_counts.assign(1, 1);
  touched.clear();
  frontier.assign(1, source);
  dist[source] = 0;
  touched.push_back(source);
  for (Index level = 1; !frontier.empty(); ++level) {
    if (max_radius > 0 && level > max_radius) break;
    next.clear();
    for (Index u : frontier) {
      for (Index v : g.neighbors(u)) {
        if (dist[v] == kUnreachable) {
          dist[v] = level;
          touched.push_back(v);
          next.push_back(v);
        }
      }
    }
    if (!next.empty()) level_counts.push_back(static_cast<Index>(next.size()));
    frontier.swap(next);
  }
  for (Index v : touched) dist[v] = kUnreachable;
  return level_counts;
}

}  // namespace

DistanceVector bfs_distances(const Graph& g, Index source) {
  if (source < 0 || source >= g.num_nodes()) {
    throw std::invalid_argument("bfs_distances: source " + std::to_string(source) +
                                " out of range [0, " + std::to_string(g.num_nodes()) + ")");
  }
  DistanceVector out;
  out.distances.assign(g.num_nodes(), kUnreachable);
  std::vector<Index> queue{source};
  out.distances[source] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const Index u = queue[head];
    for (Index v : g.neighbors(u)) {
      if (out.distances[v] == kUnreachable) {
        out.distances[v] = out.distances[u] + 1;
        queue.push_back(v);
      }
    }
  }
  return out;
}

CentralityScores local_reaching_centrality(const Graph& g, const CentralityOptions& opts) {
  const Index n = g.num_nodes();
  if (n < 2) {
    throw std::invalid_argument("local_reaching_centrality: need at least 2 nodes, got " +
                                std::to_string(n));
  }
  if (opts.max_radius < 0) {
    throw std::invalid_argument("local_reaching_centrality: negative max_radius");
  }

  std::vector<Index> component_size;
  ComponentLabeling comps;
  if (opts.component_local_n) {
    comps = connected_components(g);
    component_size = comps.sizes();
  }

  CentralityScores out;
  out.scores.assign(n, 0.0);

  auto work = [&](Index begin, Index end) {
    std::vector<Index> dist(n, kUnreachable), frontier, next, touched, levels;
    for (Index s = begin; s < end; ++s) {
      bfs_levels(g, s, opts.max_radius, dist, frontier, next, touched, levels);
      double sum = 0.0;
      for (std::size_t d = 1; d < levels.size(); ++d) {
        sum += static_cast<double>(levels[d]) / static_cast<double>(d);
      }
      const Index norm_n = opts.component_local_n ? component_size[comps.component_id[s]] : n;
      out.scores[s] = norm_n > 1 ? sum / static_cast<double>(norm_n - 1) : 0.0;
    }
  };

  unsigned threads = opts.threads != 0 ? opts.threads : std::thread::hardware_concurrency();
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  if (threads == 1) {
    work(0, n);
    return out;
  }
  {
    std::vector<std::jthread> pool;
    const Index chunk = (n + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      const Index begin = std::min<Index>(n, t * chunk);
      const Index end = std::min<Index>(n, begin + chunk);
      if (begin < end) pool.emplace_back(work, begin, end);
    }
  }
  return out;
}

}  // namespace gcnsel
