#include "gcnsel/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace gcnsel {

void SparseMatrix::validate() const {
  if (num_rows < 0 || num_cols < 0) {
    throw std::invalid_argument("SparseMatrix: negative dimension");
  }
  if (row_offsets.size() != static_cast<std::size_t>(num_rows) + 1) {
    throw std::invalid_argument("SparseMatrix: row_offsets length != rows + 1");
  }
  if (row_offsets.front() != 0 ||
      row_offsets.back() != static_cast<Index>(col_indices.size())) {
    throw std::invalid_argument("SparseMatrix: row_offsets do not span col_indices");
  }
  if (values.size() != col_indices.size()) {
    throw std::invalid_argument("SparseMatrix: values/col_indices length mismatch");
  }
  for (Index r = 0; r < num_rows; ++r) {
    if (row_offsets[r] > row_offsets[r + 1]) {
      throw std::invalid_argument("SparseMatrix: row_offsets decreasing at row " +
                                  std::to_string(r));
    }
  }
  for (Index c : col_indices) {
    if (c < 0 || c >= num_cols) {
      throw std::invalid_argument("SparseMatrix: column index out of range");
    }
  }
}

double SparseMatrix::max_asymmetry() const {
  if (num_rows != num_cols) {
    throw std::invalid_argument("max_asymmetry: matrix is not square");
  }
  auto lookup = [this](Index r, Index c) -> double {
    const auto first = col_indices.begin() + row_offsets[r];
    const auto last = col_indices.begin() + row_offsets[r + 1];
    const auto it = std::lower_bound(first, last, c);
    if (it == last || *it != c) return 0.0;
    return values[static_cast<std::size_t>(it - col_indices.begin())];
  };
  double worst = 0.0;
  for (Index r = 0; r < num_rows; ++r) {
    for (Index k = row_offsets[r]; k < row_offsets[r + 1]; ++k) {
      worst = std::max(worst, std::abs(values[k] - lookup(col_indices[k], r)));
    }
  }
  return worst;
}

Dense SparseMatrix::to_dense() const {
  Dense d = Dense::Zero(num_rows, num_cols);
  for (Index r = 0; r < num_rows; ++r) {
    for (Index k = row_offsets[r]; k < row_offsets[r + 1]; ++k) {
      d(r, col_indices[k]) += values[k];
    }
  }
  return d;
}

SparseMatrix SparseMatrix::identity(Index n) {
  SparseMatrix m;
  m.num_rows = m.num_cols = n;
  m.row_offsets.resize(n + 1);
  std::iota(m.row_offsets.begin(), m.row_offsets.end(), Index{0});
  m.col_indices.resize(n);
  std::iota(m.col_indices.begin(), m.col_indices.end(), Index{0});
  m.values.assign(n, 1.0);
  return m;
}

SparseMatrix SparseMatrix::from_dense(const Dense& d) {
  SparseMatrix m;
  m.num_rows = d.rows();
  m.num_cols = d.cols();
  m.row_offsets.assign(1, 0);
  for (Index r = 0; r < d.rows(); ++r) {
    for (Index c = 0; c < d.cols(); ++c) {
      if (d(r, c) != 0.0) {
        m.col_indices.push_back(c);
        m.values.push_back(d(r, c));
      }
    }
    m.row_offsets.push_back(static_cast<Index>(m.col_indices.size()));
  }
  return m;
}

Graph Graph::from_csr(Index num_nodes, std::vector<Index> row_offsets,
                      std::vector<Index> col_indices) {
  if (num_nodes < 0) throw std::invalid_argument("Graph: negative node count");
  if (row_offsets.size() != static_cast<std::size_t>(num_nodes) + 1 ||
      row_offsets.front() != 0 ||
      row_offsets.back() != static_cast<Index>(col_indices.size())) {
    throw std::invalid_argument("Graph: malformed row_offsets");
  }
  for (Index i = 0; i < num_nodes; ++i) {
    const Index begin = row_offsets[i];
    const Index end = row_offsets[i + 1];
    if (begin > end) throw std::invalid_argument("Graph: row_offsets decreasing");
    for (Index k = begin; k < end; ++k) {
      const Index j = col_indices[k];
      if (j < 0 || j >= num_nodes) {
        throw std::invalid_argument("Graph: neighbor index out of range");
      }
      if (j == i) throw std::invalid_argument("Graph: self-loop at node " + std::to_string(i));
      if (k > begin && col_indices[k - 1] >= j) {
        throw std::invalid_argument("Graph: neighbors unsorted or duplicated at node " +
                                    std::to_string(i));
      }
    }
  }
  Graph g;
  g.num_nodes_ = num_nodes;
  g.row_offsets_ = std::move(row_offsets);
  g.col_indices_ = std::move(col_indices);
  for (Index i = 0; i < num_nodes; ++i) {
    for (Index j : g.neighbors(i)) {
      const auto back = g.neighbors(j);
      if (!std::binary_search(back.begin(), back.end(), i)) {
        throw std::invalid_argument("Graph: asymmetric edge " + std::to_string(i) +
                                    " -> " + std::to_string(j));
      }
    }
  }
  return g;
}

std::vector<Index> ComponentLabeling::sizes() const {
  std::vector<Index> out(num_components, 0);
  for (Index c : component_id) ++out[c];
  return out;
}

Graph build_graph(std::span<const std::pair<Index, Index>> edges, Index num_nodes) {
  if (num_nodes < 0) throw std::invalid_argument("build_graph: negative node count");
  std::vector<Index> degree(num_nodes, 0);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto [u, v] = edges[e];
    if (u < 0 || u >= num_nodes || v < 0 || v >= num_nodes) {
      throw std::invalid_argument("build_graph: edge #" + std::to_string(e) + " (" +
                                  std::to_string(u) + ", " + std::to_string(v) +
                                  ") has an endpoint outside [0, " +
                                  std::to_string(num_nodes) + ")");
    }
    if (u == v) continue;
    ++degree[u];
    ++degree[v];
  }

  std::vector<Index> offsets(num_nodes + 1, 0);
  for (Index i = 0; i < num_nodes; ++i) offsets[i + 1] = offsets[i] + degree[i];
  std::vector<Index> cols(offsets.back());
  std::vector<Index> cursor(offsets.begin(), offsets.end() - 1);
  for (const auto& [u, v] : edges) {
    if (u == v) continue;
    cols[cursor[u]++] = v;
    cols[cursor[v]++] = u;
  }

  // Sort and deduplicate each row, compacting in place.
  std::vector<Index> compact_offsets(num_nodes + 1, 0);
  Index write = 0;
  for (Index i = 0; i < num_nodes; ++i) {
    auto first = cols.begin() + offsets[i];
    auto last = cols.begin() + offsets[i + 1];
    std::sort(first, last);
    last = std::unique(first, last);
    for (auto it = first; it != last; ++it) cols[write++] = *it;
    compact_offsets[i + 1] = write;
  }
  cols.resize(write);
  return Graph::from_csr(num_nodes, std::move(compact_offsets), std::move(cols));
}

DegreeVector degrees(const Graph& g) {
  DegreeVector d;
  d.degrees.resize(g.num_nodes());
  for (Index i = 0; i < g.num_nodes(); ++i) d.degrees[i] = g.degree(i);
  return d;
}

ComponentLabeling connected_components(const Graph& g) {
  ComponentLabeling out;
  out.component_id.assign(g.num_nodes(), -1);
  std::vector<Index> queue;
  queue.reserve(g.num_nodes());
  for (Index s = 0; s < g.num_nodes(); ++s) {
    if (out.component_id[s] >= 0) continue;
    const Index id = out.num_components++;
    queue.clear();
    queue.push_back(s);
    out.component_id[s] = id;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      for (Index v : g.neighbors(queue[head])) {
        if (out.component_id[v] < 0) {
          out.component_id[v] = id;
          queue.push_back(v);
        }
      }
    }
  }
  return out;
}

SparseMatrix normalized_adjacency(const Graph& g) {
  const Index n = g.num_nodes();
  std::vector<double> inv_sqrt(n);
  for (Index i = 0; i < n; ++i) {
    inv_sqrt[i] = 1.0 / std::sqrt(static_cast<double>(g.degree(i) + 1));
  }
  SparseMatrix m;
  m.num_rows = m.num_cols = n;
  m.row_offsets.assign(n + 1, 0);
  m.col_indices.reserve(g.col_indices().size() + n);
  m.values.reserve(g.col_indices().size() + n);
  for (Index i = 0; i < n; ++i) {
    bool diagonal_done = false;
    for (Index j : g.neighbors(i)) {
      if (!diagonal_done && j > i) {
        m.col_indices.push_back(i);
        m.values.push_back(inv_sqrt[i] * inv_sqrt[i]);
        diagonal_done = true;
      }
      m.col_indices.push_back(j);
      m.values.push_back(inv_sqrt[i] * inv_sqrt[j]);
    }
    if (!diagonal_done) {
      m.col_indices.push_back(i);
      m.values.push_back(inv_sqrt[i] * inv_sqrt[i]);
    }
    m.row_offsets[i + 1] = static_cast<Index>(m.col_indices.size());
  }
  return m;
}

SparseMatrix normalized_laplacian(const Graph& g) {
  const Index n = g.num_nodes();
  std::vector<double> inv_sqrt(n, 0.0);
  for (Index i = 0; i < n; ++i) {
    if (g.degree(i) > 0) inv_sqrt[i] = 1.0 / std::sqrt(static_cast<double>(g.degree(i)));
  }
  SparseMatrix m;
  m.num_rows = m.num_cols = n;
  m.row_offsets.assign(n + 1, 0);
  for (Index i = 0; i < n; ++i) {
    if (g.degree(i) > 0) {
      bool diagonal_done = false;
      for (Index j : g.neighbors(i)) {
        if (!diagonal_done && j > i) {
          m.col_indices.push_back(i);
          m.values.push_back(1.0);
          diagonal_done = true;
        }
        m.col_indices.push_back(j);
        m.values.push_back(-inv_sqrt[i] * inv_sqrt[j]);
      }
      if (!diagonal_done) {
        m.col_indices.push_back(i);
        m.values.push_back(1.0);
      }
    }
    m.row_offsets[i + 1] = static_cast<Index>(m.col_indices.size());
  }
  return m;
}

Dense spmm(const SparseMatrix& m, const Dense& x) {
  if (m.num_cols != x.rows()) {
    throw std::invalid_argument("spmm: sparse has " + std::to_string(m.num_cols) +
                                " columns but dense has " + std::to_string(x.rows()) +
                                " rows");
  }
  Dense out = Dense::Zero(m.num_rows, x.cols());
  for (Index r = 0; r < m.num_rows; ++r) {
    auto out_row = out.row(r);
    for (Index k = m.row_offsets[r]; k < m.row_offsets[r + 1]; ++k) {
      out_row.noalias() += m.values[k] * x.row(m.col_indices[k]);
    }
  }
  return out;
}

Dense spmm_transposed(const SparseMatrix& m, const Dense& x) {
  if (m.num_rows != x.rows()) {
    throw std::invalid_argument("spmm_transposed: sparse has " +
                                std::to_string(m.num_rows) + " rows but dense has " +
                                std::to_string(x.rows()) + " rows");
  }
  Dense out = Dense::Zero(m.num_cols, x.cols());
  for (Index r = 0; r < m.num_rows; ++r) {
    const auto x_row = x.row(r);
    for (Index k = m.row_offsets[r]; k < m.row_offsets[r + 1]; ++k) {
      out.row(m.col_indices[k]).noalias() += m.values[k] * x_row;
    }
  }
  return out;
}

Graph permute(const Graph& g, std::span<const Index> perm) {
  if (static_cast<Index>(perm.size()) != g.num_nodes()) {
    throw std::invalid_argument("permute: permutation length != node count");
  }
  EdgeList edges;
  for (Index i = 0; i < g.num_nodes(); ++i) {
    for (Index j : g.neighbors(i)) {
      if (i < j) edges.emplace_back(perm[i], perm[j]);
    }
  }
  return build_graph(edges, g.num_nodes());
}

}  // namespace gcnsel
