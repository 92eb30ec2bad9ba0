#include "gcnsel/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "gcnsel/errors.hpp"

namespace gcnsel {

PreparedDataset prepare_dataset(DatasetBundle bundle, bool with_centrality,
                                const CentralityOptions& opts) {
  PreparedDataset d;
  d.a_hat = normalized_adjacency(bundle.graph);
  d.features = row_normalize_features(bundle.features);
  if (with_centrality) d.centrality = local_reaching_centrality(bundle.graph, opts);
  d.bundle = std::move(bundle);
  return d;
}

ResultRow run_cell(const PreparedDataset& data, Policy policy, double rate, std::uint64_t seed,
                   const ExperimentOptions& opts) {
  const auto& b = data.bundle;
  const Index n = b.num_nodes();
  if (needs_centrality(policy) && !data.centrality) {
    throw std::invalid_argument("run_cell: policy " + std::string(policy_name(policy)) +
                                " needs centrality scores");
  }
  const Index budget = budget_for_rate(rate, n);
  const std::span<const double> scores =
      data.centrality ? std::span<const double>(data.centrality->scores) : std::span<const double>();
  const auto train_nodes = with_stage("select", [&] {
    return select_train_nodes(scores, b.labels, policy, budget, seed, opts.select);
  });
  const Index val_size = std::min(opts.val_size.value_or(default_val_size(n)), n - budget);
  const Split split =
      with_stage("split", [&] { return make_split(b.graph, train_nodes, val_size, seed); });

  TrainConfig cfg = opts.train;
  cfg.seed = seed;
  const TrainResult r = with_stage("train", [&] {
    return train(data.a_hat, data.features, b.labels, b.num_classes(), split, cfg);
  });

  ResultRow row;
  row.dataset = b.name;
  row.policy = policy;
  row.rate = rate;
  row.seed = seed;
  row.accuracy = r.test_accuracy;
  row.loss = r.test_loss;
  row.stop_best = static_cast<double>(r.stop_epoch);
  row.stop_halt = static_cast<double>(r.halt_epoch);
  return row;
}

ResultRow mean_row(std::span<const ResultRow> rows) {
  if (rows.empty()) throw std::invalid_argument("mean_row: no rows");
  ResultRow m = rows.front();
  m.seed.reset();
  m.status = "ok";
  m.accuracy = m.loss = m.stop_best = m.stop_halt = 0.0;
  Index count = 0;
  for (const auto& r : rows) {
    if (r.status != "ok") continue;
    m.accuracy += r.accuracy;
    m.loss += r.loss;
    m.stop_best += r.stop_best;
    m.stop_halt += r.stop_halt;
    ++count;
  }
  if (count == 0) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    m.accuracy = m.loss = m.stop_best = m.stop_halt = nan;
    m.status = "no successful runs";
    return m;
  }
  const auto c = static_cast<double>(count);
  m.accuracy /= c;
  m.loss /= c;
  m.stop_best /= c;
  m.stop_halt /= c;
  return m;
}

std::vector<ResultRow> run_fixed(const PreparedDataset& data, Policy policy, double rate,
                                 std::span<const std::uint64_t> seeds,
                                 const ExperimentOptions& opts) {
  if (seeds.empty()) throw std::invalid_argument("run_fixed: no seeds");
  std::vector<ResultRow> rows;
  for (std::uint64_t seed : seeds) rows.push_back(run_cell(data, policy, rate, seed, opts));
  rows.push_back(mean_row(rows));
  return rows;
}

std::vector<ResultRow> run_sweep(const PreparedDataset& data, std::span<const Policy> policies,
                                 std::span<const double> rates,
                                 std::span<const std::uint64_t> seeds,
                                 const ExperimentOptions& opts) {
  if (policies.empty() || rates.empty() || seeds.empty()) {
    throw std::invalid_argument("run_sweep: need at least one policy, rate and seed");
  }
  struct Cell {
    Policy policy;
    double rate;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  for (Policy p : policies) {
    for (double r : rates) {
      for (std::uint64_t s : seeds) cells.push_back({p, r, s});
    }
  }
  std::vector<ResultRow> rows(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < cells.size(); k = next++) {
      const auto& c = cells[k];
      try {
        rows[k] = run_cell(data, c.policy, c.rate, c.seed, opts);
      } catch (const std::exception& e) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        rows[k] = ResultRow{data.bundle.name, c.policy, c.rate, c.seed, nan, nan, nan, nan,
                            e.what()};
      }
    }
  };

  unsigned jobs = opts.jobs != 0 ? opts.jobs : std::thread::hardware_concurrency();
  jobs = std::clamp<unsigned>(jobs, 1, static_cast<unsigned>(cells.size()));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < jobs; ++t) pool.emplace_back(worker);
    worker();
  }

  std::stable_sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
    return std::tuple(policy_name(a.policy), a.rate, *a.seed) <
           std::tuple(policy_name(b.policy), b.rate, *b.seed);
  });
  return rows;
}

}  // namespace gcnsel
