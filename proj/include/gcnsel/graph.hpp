#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace gcnsel {

using Index = std::int64_t;

// Row-major dense matrix used for features, activations and weights.
using Dense =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Compressed sparse row matrix with 64-bit values.
struct SparseMatrix {
  Index num_rows = 0;
  Index num_cols = 0;
  std::vector<Index> row_offsets{0};
  std::vector<Index> col_indices;
  std::vector<double> values;

  Index nnz() const { return static_cast<Index>(col_indices.size()); }

  // Throws std::invalid_argument when the CSR arrays are inconsistent.
  void validate() const;

  // Largest |m(i,j) - m(j,i)| over stored and implicit entries. Requires a
  // square matrix with column indices sorted within each row.
  double max_asymmetry() const;

  Dense to_dense() const;

  static SparseMatrix identity(Index n);
  static SparseMatrix from_dense(const Dense& d);
};

/// Immutable simple undirected graph in CSR form. Neighbor lists are sorted
/// ascending, free of duplicates and self-loops, and symmetric.
class Graph {
 public:
  Graph() = default;

  // Validates the arrays against every Graph invariant.
  static Graph from_csr(Index num_nodes, std::vector<Index> row_offsets,
                        std::vector<Index> col_indices);

  Index num_nodes() const { return num_nodes_; }
  // Number of undirected edges.
  Index edge_count() const { return static_cast<Index>(col_indices_.size()) / 2; }
  Index degree(Index i) const { return row_offsets_[i + 1] - row_offsets_[i]; }

  std::span<const Index> neighbors(Index i) const {
    return {col_indices_.data() + row_offsets_[i],
            static_cast<std::size_t>(degree(i))};
  }

  const std::vector<Index>& row_offsets() const { return row_offsets_; }
  const std::vector<Index>& col_indices() const { return col_indices_; }

 private:
  Index num_nodes_ = 0;
  std::vector<Index> row_offsets_{0};
  std::vector<Index> col_indices_;
};

struct DegreeVector {
  std::vector<Index> degrees;
};

struct ComponentLabeling {
  std::vector<Index> component_id;
  Index num_components = 0;

  std::vector<Index> sizes() const;
};

using EdgeList = std::vector<std::pair<Index, Index>>;

// Symmetrizes the edge list, drops self-loops and duplicates. Throws
// std::invalid_argument naming the first edge with an endpoint outside
// [0, num_nodes).
Graph build_graph(std::span<const std::pair<Index, Index>> edges,
                  Index num_nodes);

DegreeVector degrees(const Graph& g);

// Component ids are assigned in order of each component's smallest node.
ComponentLabeling connected_components(const Graph& g);

// D~^{-1/2} (A + I) D~^{-1/2} with D~ the degree matrix of A + I.
SparseMatrix normalized_adjacency(const Graph& g);

// D^{-1/2} (D - A) D^{-1/2} without self-loops; rows and columns of isolated
// nodes are all zero.
SparseMatrix normalized_laplacian(const Graph& g);

// m * x.
Dense spmm(const SparseMatrix& m, const Dense& x);

// m^T * x, without materializing the transpose.
Dense spmm_transposed(const SparseMatrix& m, const Dense& x);

// Relabels nodes: node i of g becomes node perm[i] of the result.
Graph permute(const Graph& g, std::span<const Index> perm);

}  // namespace gcnsel
