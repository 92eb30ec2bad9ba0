#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gcnsel/centrality.hpp"
#include "gcnsel/data_io.hpp"
#include "gcnsel/selection.hpp"
#include "gcnsel/trainer.hpp"

namespace gcnsel {

struct ExperimentOptions {
  TrainConfig train;
  SelectOptions select;
  CentralityOptions centrality;
  // Validation nodes per run; defaults to default_val_size(n), capped by the
  // number of non-training nodes.
  std::optional<Index> val_size;
  // Sweep worker threads; 0 means hardware concurrency.
  unsigned jobs = 0;
};

// A loaded dataset with everything the runs share: normalized features, the
// propagation operator and (when requested) centrality scores.
struct PreparedDataset {
  DatasetBundle bundle;
  SparseMatrix a_hat;
  SparseMatrix features;
  std::optional<CentralityScores> centrality;
};

PreparedDataset prepare_dataset(DatasetBundle bundle, bool with_centrality,
                                const CentralityOptions& opts = {});

struct ResultRow {
  std::string dataset;
  Policy policy = Policy::kDF;
  double rate = 0.0;
  std::optional<std::uint64_t> seed;  // empty for a mean row
  double accuracy = 0.0;
  double loss = 0.0;
  double stop_best = 0.0;
  double stop_halt = 0.0;
  std::string status = "ok";
};

// select -> split -> train -> evaluate for one (policy, rate, seed). The same
// seed drives selection, the validation draw, initialization and dropout
// through independent streams.
ResultRow run_cell(const PreparedDataset& data, Policy policy, double rate, std::uint64_t seed,
                   const ExperimentOptions& opts);

// Mean of the rows with status "ok"; metrics are NaN if there are none.
ResultRow mean_row(std::span<const ResultRow> rows);

// One row per seed followed by their mean row.
std::vector<ResultRow> run_fixed(const PreparedDataset& data, Policy policy, double rate,
                                 std::span<const std::uint64_t> seeds,
                                 const ExperimentOptions& opts);

// The full policy x rate x seed grid, sorted by (policy name, rate, seed).
// A failing cell is recorded with its error in `status` and NaN metrics.
std::vector<ResultRow> run_sweep(const PreparedDataset& data, std::span<const Policy> policies,
                                 std::span<const double> rates,
                                 std::span<const std::uint64_t> seeds,
                                 const ExperimentOptions& opts);

}  // namespace gcnsel
