#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "gcnsel/graph.hpp"

namespace gcnsel {

struct DatasetBundle {
  std::string name;
  Graph graph;
  SparseMatrix features;  // num_nodes x num_features
  std::vector<Index> labels;
  std::vector<std::string> class_names;  // lexicographic; labels index into it
  Index edge_rows = 0;  // edge lines in the source file, before symmetrization/dedup

  Index num_nodes() const { return graph.num_nodes(); }
  Index num_classes() const { return static_cast<Index>(class_names.size()); }
  Index num_features() const { return features.num_cols; }
};

// Optional expected counts read from meta.tsv.
struct DatasetMeta {
  std::optional<std::string> name;
  std::optional<Index> nodes;
  std::optional<Index> edges;  // edge rows as listed in edges.tsv
  std::optional<Index> undirected_edges;
  std::optional<Index> components;
  std::optional<Index> classes;
  std::optional<Index> features;
  std::optional<std::vector<std::string>> labels;  // allowed label strings
};

// Headline counts of a dataset.
struct DatasetSummary {
  Index nodes = 0;
  Index edges = 0;
  Index undirected_edges = 0;
  Index components = 0;
  Index classes = 0;
  Index features = 0;
};

DatasetSummary summarize(const DatasetBundle& b);
std::string format_summary(const std::string& name, const DatasetSummary& s);

// Throws DataError naming the first field that differs from an expectation.
void check_summary(const DatasetSummary& s, const DatasetMeta& expected);

/// Reads nodes.tsv, edges.tsv and the optional meta.tsv from dir.
///
/// nodes.tsv rows are `id<TAB>label<TAB>features` with either dense
/// space-separated values or sparse `idx:val` tokens; ids must cover
/// 0..n-1 exactly once. edges.tsv rows are `src<TAB>dst`, interpreted
/// undirected. '#' lines and blank lines are skipped. Any malformed row
/// raises DataError with file name and line number; counts that disagree
/// with meta.tsv raise DataError naming the mismatch.
DatasetBundle load_dataset(const std::filesystem::path& dir);

DatasetMeta load_meta(const std::filesystem::path& file);

// Writes nodes.tsv (sparse tokens, shortest round-trip decimal), edges.tsv
// (one row per undirected edge) and meta.tsv with the bundle's counts.
void save_dataset(const DatasetBundle& b, const std::filesystem::path& dir);

// Divides every nonzero row by its L1 norm; zero rows stay zero.
SparseMatrix row_normalize_features(const SparseMatrix& f);
Dense row_normalize_features(const Dense& f);

struct SbmParams {
  Index num_nodes = 200;
  Index num_classes = 2;
  double p_in = 0.2;
  double p_out = 0.01;
  Index feature_dim = 16;
  double feature_signal = 1.0;
  std::uint64_t seed = 0;
};

/// Stochastic block model with contiguous equal-size blocks (node i is in
/// block i * C / n). Each pair is connected with probability p_in inside a
/// block and p_out across blocks. Features are feature_signal on the
/// coordinate (class mod feature_dim) plus standard normal noise everywhere.
/// Throws std::invalid_argument unless 0 <= p_out <= p_in <= 1.
DatasetBundle generate_sbm(const SbmParams& params);

}  // namespace gcnsel
