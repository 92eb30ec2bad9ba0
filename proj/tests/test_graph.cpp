#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "gcnsel/graph.hpp"
#include "test_support.hpp"

using namespace gcnsel;
using namespace gcnsel::testing;

TEST_CASE("build_graph symmetrizes and deduplicates") {
  const EdgeList edges{{0, 1}, {1, 0}, {1, 2}};
  const Graph g = build_graph(edges, 3);
  CHECK(g.edge_count() == 2);
  CHECK(degrees(g).degrees == std::vector<Index>{1, 2, 1});
  CHECK(std::vector<Index>(g.neighbors(1).begin(), g.neighbors(1).end()) ==
        std::vector<Index>{0, 2});
}

TEST_CASE("build_graph drops self-loops and handles empty edge lists") {
  const Graph loops = build_graph(EdgeList{{0, 0}, {0, 1}, {1, 1}}, 2);
  CHECK(loops.edge_count() == 1);
  const Graph empty = build_graph(EdgeList{}, 2);
  CHECK(empty.num_nodes() == 2);
  CHECK(empty.edge_count() == 0);
  CHECK(connected_components(empty).num_components == 2);
}

TEST_CASE("build_graph reports the offending edge") {
  const EdgeList edges{{0, 1}, {1, 5}};
  try {
    build_graph(edges, 3);
    FAIL("expected rejection");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("edge #1 (1, 5)") != std::string::npos);
  }
  CHECK_THROWS_AS(build_graph(EdgeList{{-1, 0}}, 3), std::invalid_argument);
}

TEST_CASE("Graph::from_csr enforces invariants") {
  CHECK_NOTHROW(Graph::from_csr(2, {0, 1, 2}, {1, 0}));
  CHECK_THROWS(Graph::from_csr(2, {0, 1, 1}, {1}));          // asymmetric
  CHECK_THROWS(Graph::from_csr(2, {0, 1, 2}, {0, 0}));       // self-loop
  CHECK_THROWS(Graph::from_csr(3, {0, 2, 3, 4}, {1, 1, 0, 0}));  // duplicate
  CHECK_THROWS(Graph::from_csr(2, {0, 1, 2}, {1, 7}));       // out of range
}

TEST_CASE("degree sum is twice the edge count") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Graph g = random_graph(40, 0.1, seed);
    Index sum = 0;
    for (Index d : degrees(g).degrees) sum += d;
    CHECK(sum == 2 * g.edge_count());
  }
}

TEST_CASE("connected_components") {
  CHECK(connected_components(build_graph(EdgeList{}, 2)).num_components == 2);
  const Graph g = build_graph(EdgeList{{0, 1}, {2, 3}, {3, 4}}, 6);
  const auto cc = connected_components(g);
  CHECK(cc.num_components == 3);
  CHECK(cc.component_id == std::vector<Index>{0, 0, 1, 1, 1, 2});
  CHECK(cc.sizes() == std::vector<Index>{2, 3, 1});
}

TEST_CASE("connected_components is invariant under relabeling") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Graph g = random_graph(30, 0.05, seed);
    const auto perm = random_permutation(30, seed + 100);
    const Graph h = permute(g, perm);
    const auto a = connected_components(g);
    const auto b = connected_components(h);
    REQUIRE(a.num_components == b.num_components);
    // Same partition: i~j in g iff perm[i]~perm[j] in h.
    for (Index i = 0; i < 30; ++i)
      for (Index j = 0; j < 30; ++j)
        CHECK((a.component_id[i] == a.component_id[j]) ==
              (b.component_id[perm[i]] == b.component_id[perm[j]]));
  }
}

TEST_CASE("normalized_adjacency small cases") {
  const Dense edge = normalized_adjacency(build_graph(EdgeList{{0, 1}}, 2)).to_dense();
  CHECK(edge(0, 0) == doctest::Approx(0.5));
  CHECK(edge(0, 1) == doctest::Approx(0.5));
  CHECK(edge(1, 0) == doctest::Approx(0.5));
  CHECK(edge(1, 1) == doctest::Approx(0.5));

  const SparseMatrix iso = normalized_adjacency(build_graph(EdgeList{}, 1));
  CHECK(iso.nnz() == 1);
  CHECK(iso.values[0] == 1.0);

  const Dense k3 = normalized_adjacency(complete_graph(3)).to_dense();
  for (Index i = 0; i < 3; ++i)
    for (Index j = 0; j < 3; ++j) CHECK(k3(i, j) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("normalized_adjacency matches the dense definition, is symmetric, positive rows") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Graph g = random_graph(25, 0.15, seed);
    const SparseMatrix m = normalized_adjacency(g);
    m.validate();
    CHECK(m.max_asymmetry() == 0.0);
    Dense a = dense_adjacency(g) + Dense::Identity(25, 25);
    const Eigen::VectorXd d = a.rowwise().sum();
    Dense expected(25, 25);
    for (Index i = 0; i < 25; ++i)
      for (Index j = 0; j < 25; ++j) expected(i, j) = a(i, j) / std::sqrt(d(i) * d(j));
    CHECK((m.to_dense() - expected).cwiseAbs().maxCoeff() < 1e-15);
    const Eigen::VectorXd rows = m.to_dense().rowwise().sum();
    CHECK(rows.minCoeff() > 0.0);
  }
}

TEST_CASE("normalized_laplacian small cases") {
  const Dense edge = normalized_laplacian(build_graph(EdgeList{{0, 1}}, 2)).to_dense();
  CHECK(edge(0, 0) == doctest::Approx(1.0));
  CHECK(edge(0, 1) == doctest::Approx(-1.0));
  CHECK(edge(1, 1) == doctest::Approx(1.0));

  const Dense iso = normalized_laplacian(build_graph(EdgeList{{0, 1}}, 3)).to_dense();
  CHECK(iso.row(2).cwiseAbs().sum() == 0.0);
  CHECK(iso.col(2).cwiseAbs().sum() == 0.0);
}

TEST_CASE("normalized_laplacian equals I_S minus the loop-free normalized adjacency") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Graph g = random_graph(30, 0.06, seed);  // sparse enough for isolated nodes
    const Dense a = dense_adjacency(g);
    Dense expected = Dense::Zero(30, 30);
    for (Index i = 0; i < 30; ++i) {
      if (g.degree(i) == 0) continue;
      expected(i, i) = 1.0;
      for (Index j = 0; j < 30; ++j) {
        if (a(i, j) != 0.0) {
          expected(i, j) -= 1.0 / std::sqrt(double(g.degree(i)) * double(g.degree(j)));
        }
      }
    }
    const SparseMatrix l = normalized_laplacian(g);
    l.validate();
    CHECK(l.max_asymmetry() == 0.0);
    CHECK((l.to_dense() - expected).cwiseAbs().maxCoeff() < 1e-15);
  }
}

TEST_CASE("spmm") {
  const Dense x = random_dense(4, 3, 1);
  CHECK((spmm(SparseMatrix::identity(4), x) - x).cwiseAbs().maxCoeff() == 0.0);

  const SparseMatrix half = normalized_adjacency(build_graph(EdgeList{{0, 1}}, 2));
  Dense col(2, 1);
  col << 1.0, 3.0;
  const Dense r = spmm(half, col);
  CHECK(r(0, 0) == doctest::Approx(2.0));
  CHECK(r(1, 0) == doctest::Approx(2.0));

  CHECK_THROWS_AS(spmm(SparseMatrix::identity(3), x), std::invalid_argument);
  CHECK_THROWS_AS(spmm_transposed(SparseMatrix::identity(3), x), std::invalid_argument);
}

TEST_CASE("spmm and spmm_transposed agree with a dense product oracle") {
  SplitMix64 rng(42);
  for (int trial = 0; trial < 10; ++trial) {
    Dense dense = Dense::Zero(20, 20);
    for (Index i = 0; i < 20; ++i)
      for (Index j = 0; j < 20; ++j)
        if (rng.uniform() < 0.2) dense(i, j) = 2.0 * rng.uniform() - 1.0;
    const SparseMatrix m = SparseMatrix::from_dense(dense);
    const Dense x = random_dense(20, 5, 100 + trial);
    // Textbook triple loop as the oracle.
    Dense expected = Dense::Zero(20, 5);
    Dense expected_t = Dense::Zero(20, 5);
    for (Index i = 0; i < 20; ++i)
      for (Index k = 0; k < 20; ++k)
        for (Index c = 0; c < 5; ++c) {
          expected(i, c) += dense(i, k) * x(k, c);
          expected_t(i, c) += dense(k, i) * x(k, c);
        }
    CHECK((spmm(m, x) - expected).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((spmm_transposed(m, x) - expected_t).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("SparseMatrix::validate rejects malformed CSR") {
  SparseMatrix m = SparseMatrix::identity(3);
  CHECK_NOTHROW(m.validate());
  m.col_indices[1] = 5;
  CHECK_THROWS(m.validate());
  SparseMatrix short_offsets = SparseMatrix::identity(3);
  short_offsets.row_offsets.pop_back();
  CHECK_THROWS(short_offsets.validate());
}
