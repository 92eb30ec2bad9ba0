// gcnsel: label-selection experiments for a transductive two-layer GCN.
//
//   gcnsel spectrum   --data DIR [--data DIR ...] [--out FILE] [--allow-large]
//   gcnsel fixed      --data DIR --policy NAME --rate R [--seeds N | --seed-list a,b]
//   gcnsel sweep      --data DIR [--policy a,b] [--rates A:B:STEP] [--svg FILE]
//   gcnsel synth      --out DIR [--nodes N] [--classes C] [--p-in P] [--p-out P]
//   gcnsel centrality --data DIR [--out FILE]
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure.

#include <algorithm>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gcnsel/centrality.hpp"
#include "gcnsel/data_io.hpp"
#include "gcnsel/errors.hpp"
#include "gcnsel/experiment.hpp"
#include "gcnsel/report.hpp"
#include "gcnsel/selection.hpp"
#include "gcnsel/spectral.hpp"

namespace {

using namespace gcnsel;

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumerical = 3;

struct CommonOptions {
  std::vector<std::string> data;
  std::string out;
  unsigned jobs = 0;
  bool stratify = false;
  Index max_radius = 0;
  bool component_local_n = false;
  Index num_seeds = 5;
  std::vector<std::uint64_t> seed_list;
  // training overrides
  TrainConfig train;
  std::optional<Index> val_size;
};

void add_centrality_flags(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--max-radius", o.max_radius, "Ignore nodes farther than R hops (0 = unbounded)")
      ->check(CLI::NonNegativeNumber);
  cmd->add_flag("--component-local-n", o.component_local_n,
                "Normalize centrality by component size instead of node count");
}

void add_run_flags(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--seeds", o.num_seeds, "Run seeds 0..N-1")->check(CLI::PositiveNumber);
  cmd->add_option("--seed-list", o.seed_list, "Explicit seeds")->delimiter(',');
  cmd->add_flag("--stratify", o.stratify, "Apply MC/LC/ECM rankings per class");
  cmd->add_option("--epochs", o.train.max_epochs, "Maximum training epochs")->capture_default_str();
  cmd->add_option("--patience", o.train.patience, "Early-stopping patience")->capture_default_str();
  cmd->add_option("--hidden", o.train.hidden_dim, "Hidden units")->capture_default_str();
  cmd->add_option("--lr", o.train.lr, "Adam learning rate")->capture_default_str();
  cmd->add_option("--dropout", o.train.dropout_p, "Dropout rate")->capture_default_str();
  cmd->add_option("--weight-decay", o.train.weight_decay, "L2 penalty on the first layer")
      ->capture_default_str();
  cmd->add_option("--val-size", o.val_size, "Validation nodes (default min(500, n/10))");
  add_centrality_flags(cmd, o);
}

std::vector<std::uint64_t> seeds_of(const CommonOptions& o) {
  if (!o.seed_list.empty()) return o.seed_list;
  std::vector<std::uint64_t> seeds(static_cast<std::size_t>(o.num_seeds));
  std::iota(seeds.begin(), seeds.end(), std::uint64_t{0});
  return seeds;
}

CentralityOptions centrality_options(const CommonOptions& o) {
  return {.component_local_n = o.component_local_n, .max_radius = o.max_radius, .threads = o.jobs};
}

ExperimentOptions experiment_options(const CommonOptions& o) {
  ExperimentOptions e;
  e.train = o.train;
  // A short --epochs run should not trip the patience <= max_epochs check.
  e.train.patience = std::min(e.train.patience, e.train.max_epochs);
  e.select.stratify = o.stratify;
  e.centrality = centrality_options(o);
  e.val_size = o.val_size;
  e.jobs = o.jobs;
  return e;
}

DatasetBundle load_reported(const std::string& dir) {
  DatasetBundle b = with_stage("load " + dir, [&] { return load_dataset(dir); });
  std::cerr << format_summary(b.name, summarize(b)) << '\n';
  return b;
}

// Writes through `emit` to --out, or stdout when --out is empty.
void write_output(const std::string& path, const std::function<void(std::ostream&)>& emit) {
  if (path.empty()) {
    emit(std::cout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  emit(out);
}

int cmd_spectrum(const CommonOptions& o, bool allow_large) {
  std::vector<std::pair<std::string, SpectrumStats>> rows;
  for (const auto& dir : o.data) {
    const DatasetBundle b = load_reported(dir);
    const SpectrumResult s = with_stage("spectrum", [&] {
      return eigenvalues_symmetric(normalized_laplacian(b.graph),
                                   SpectrumOptions{.allow_large = allow_large});
    });
    rows.emplace_back(b.name, spectrum_stats(s));
    std::cerr << b.name << ": " << count_near_zero(s) << " near-zero eigenvalues\n";
  }
  write_output(o.out, [&](std::ostream& out) { write_spectrum_csv(out, rows); });
  return 0;
}

int cmd_fixed(const CommonOptions& o, const std::string& policy_str, double rate) {
  const Policy policy = parse_policy(policy_str);
  const auto opts = experiment_options(o);
  const PreparedDataset data = with_stage("prepare", [&] {
    return prepare_dataset(load_reported(o.data.front()), needs_centrality(policy),
                           opts.centrality);
  });
  const auto seeds = seeds_of(o);
  const auto rows = run_fixed(data, policy, rate, seeds, opts);
  write_output(o.out, [&](std::ostream& out) { write_results_csv(out, rows, false); });
  return 0;
}

int cmd_sweep(const CommonOptions& o, const std::vector<std::string>& policy_strs,
              const std::string& rate_range, const std::vector<double>& explicit_rates,
              const std::string& svg_path) {
  std::vector<Policy> policies;
  for (const auto& p : policy_strs) policies.push_back(parse_policy(p));
  const std::vector<double> rates =
      explicit_rates.empty() ? parse_rate_range(rate_range) : explicit_rates;
  for (double r : rates) budget_for_rate(r, 1);  // range check

  bool any_centrality = false;
  for (Policy p : policies) any_centrality = any_centrality || needs_centrality(p);
  const auto opts = experiment_options(o);
  const PreparedDataset data = with_stage("prepare", [&] {
    return prepare_dataset(load_reported(o.data.front()), any_centrality, opts.centrality);
  });
  const auto seeds = seeds_of(o);
  const auto rows = run_sweep(data, policies, rates, seeds, opts);

  write_output(o.out, [&](std::ostream& out) { write_results_csv(out, rows, true); });
  if (!svg_path.empty()) {
    write_output(svg_path, [&](std::ostream& out) {
      out << render_sweep_svg(rows, "Changing labeling rate performance on " + data.bundle.name);
    });
  }
  for (const auto& r : rows) {
    if (r.status != "ok") {
      std::cerr << "cell " << policy_name(r.policy) << " rate " << format_number(r.rate)
                << " seed " << *r.seed << " failed: " << r.status << '\n';
    }
  }
  return 0;
}

int cmd_synth(const SbmParams& params, const std::string& out_dir) {
  const DatasetBundle b = generate_sbm(params);
  save_dataset(b, out_dir);
  std::cerr << format_summary(b.name, summarize(b)) << '\n';
  return 0;
}

int cmd_centrality(const CommonOptions& o) {
  const DatasetBundle b = load_reported(o.data.front());
  const CentralityScores scores = with_stage(
      "centrality", [&] { return local_reaching_centrality(b.graph, centrality_options(o)); });
  write_output(o.out, [&](std::ostream& out) { write_centrality_csv(out, scores); });
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Label-selection experiments for a transductive two-layer GCN"};
  app.require_subcommand(1);

  CommonOptions o;
  bool allow_large = false;
  std::string policy = "ecm";
  double rate = 0.053;
  std::vector<std::string> sweep_policies{"mc", "lc", "ecm"};
  std::string rate_range = "0.05:0.40:0.05";
  std::vector<double> sweep_rates;
  std::string svg_path;
  SbmParams sbm;

  auto* spectrum = app.add_subcommand("spectrum", "Normalized Laplacian spectrum statistics");
  spectrum->add_option("--data", o.data, "Dataset directory (repeatable)")->required();
  spectrum->add_option("--out", o.out, "CSV output (default stdout)");
  spectrum->add_flag("--allow-large", allow_large, "Permit dense eigensolves above 5000 nodes");

  auto* fixed = app.add_subcommand("fixed", "Train under one policy at a fixed labeling rate");
  fixed->add_option("--data", o.data, "Dataset directory")->required()->expected(1);
  fixed->add_option("--policy", policy, "df | mc | lc | ecm")->capture_default_str();
  fixed->add_option("--rate", rate, "Labeling rate in (0, 1]")->capture_default_str();
  fixed->add_option("--out", o.out, "CSV output (default stdout)");
  fixed->add_option("--jobs", o.jobs, "Centrality worker threads");
  add_run_flags(fixed, o);

  auto* sweep = app.add_subcommand("sweep", "Policy x labeling-rate x seed grid");
  sweep->add_option("--data", o.data, "Dataset directory")->required()->expected(1);
  sweep->add_option("--policy", sweep_policies, "Policies (comma separated)")
      ->delimiter(',')
      ->capture_default_str();
  auto* rates_opt =
      sweep->add_option("--rates", rate_range, "Rate range A:B:STEP")->capture_default_str();
  sweep->add_option("--rate", sweep_rates, "Explicit rates (comma separated)")
      ->delimiter(',')
      ->excludes(rates_opt);
  sweep->add_option("--out", o.out, "CSV output (default stdout)");
  sweep->add_option("--svg", svg_path, "SVG line chart output");
  sweep->add_option("--jobs", o.jobs, "Worker threads (default: all cores)");
  add_run_flags(sweep, o);

  auto* synth = app.add_subcommand("synth", "Write a stochastic-block-model dataset directory");
  std::string synth_out;
  synth->add_option("--out", synth_out, "Output directory")->required();
  synth->add_option("--nodes", sbm.num_nodes)->capture_default_str();
  synth->add_option("--classes", sbm.num_classes)->capture_default_str();
  synth->add_option("--p-in", sbm.p_in)->capture_default_str();
  synth->add_option("--p-out", sbm.p_out)->capture_default_str();
  synth->add_option("--feature-dim", sbm.feature_dim)->capture_default_str();
  synth->add_option("--signal", sbm.feature_signal)->capture_default_str();
  synth->add_option("--seed", sbm.seed)->capture_default_str();

  auto* centrality = app.add_subcommand("centrality", "Dump local reaching centrality per node");
  centrality->add_option("--data", o.data, "Dataset directory")->required()->expected(1);
  centrality->add_option("--out", o.out, "CSV output (default stdout)");
  centrality->add_option("--jobs", o.jobs, "Worker threads");
  add_centrality_flags(centrality, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*spectrum) return cmd_spectrum(o, allow_large);
    if (*fixed) return cmd_fixed(o, policy, rate);
    if (*sweep) return cmd_sweep(o, sweep_policies, rate_range, sweep_rates, svg_path);
    if (*synth) return cmd_synth(sbm, synth_out);
    if (*centrality) return cmd_centrality(o);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}
