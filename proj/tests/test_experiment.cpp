#include <doctest.h>

#include <cmath>
#include <sstream>

#include "gcnsel/experiment.hpp"
#include "gcnsel/log.hpp"
#include "gcnsel/report.hpp"

using namespace gcnsel;

namespace {

const PreparedDataset& sbm_data() {
  static const PreparedDataset data = prepare_dataset(
      generate_sbm({.num_nodes = 120, .num_classes = 3, .p_in = 0.25, .p_out = 0.01,
                    .feature_dim = 8, .seed = 2}),
      true);
  return data;
}

ExperimentOptions quick() {
  ExperimentOptions o;
  o.train.max_epochs = 40;
  return o;
}

std::string csv(const std::vector<ResultRow>& rows, bool status) {
  std::ostringstream os;
  write_results_csv(os, rows, status);
  return os.str();
}

}  // namespace

TEST_CASE("run_fixed returns one row per seed plus the mean, byte-stably") {
  const std::vector<std::uint64_t> seeds{0, 1, 2};
  const auto rows = run_fixed(sbm_data(), Policy::kECM, 0.1, seeds, quick());
  REQUIRE(rows.size() == 4);
  CHECK_FALSE(rows.back().seed.has_value());
  double mean = 0.0;
  for (int k = 0; k < 3; ++k) {
    CHECK(*rows[k].seed == seeds[k]);
    CHECK(rows[k].accuracy >= 0.0);
    CHECK(rows[k].accuracy <= 1.0);
    mean += rows[k].accuracy / 3.0;
  }
  CHECK(rows.back().accuracy == doctest::Approx(mean));
  CHECK(csv(rows, false) == csv(run_fixed(sbm_data(), Policy::kECM, 0.1, seeds, quick()), false));
}

TEST_CASE("rate 1.0 labels every node and still completes") {
  const auto prev = set_warning_sink([](std::string_view) {});
  for (Policy p : {Policy::kDF, Policy::kMC, Policy::kLC, Policy::kECM}) {
    const ResultRow r = run_cell(sbm_data(), p, 1.0, 0, quick());
    CHECK(r.status == "ok");
    CHECK(std::isnan(r.accuracy));
    CHECK(r.stop_halt >= 1);
  }
  set_warning_sink(prev);
}

TEST_CASE("sweep grid cardinality, ordering and job-count independence") {
  const std::vector<Policy> policies{Policy::kMC, Policy::kECM, Policy::kDF};
  const std::vector<double> rates{0.2, 0.05};
  const std::vector<std::uint64_t> seeds{3, 1};
  ExperimentOptions one = quick();
  one.jobs = 1;
  ExperimentOptions three = quick();
  three.jobs = 3;
  const auto a = run_sweep(sbm_data(), policies, rates, seeds, one);
  const auto b = run_sweep(sbm_data(), policies, rates, seeds, three);
  CHECK(a.size() == policies.size() * rates.size() * seeds.size());
  CHECK(csv(a, true) == csv(b, true));
  CHECK(policy_name(a.front().policy) == "df");
  CHECK(a.front().rate == 0.05);
  CHECK(*a.front().seed == 1);
  CHECK(policy_name(a.back().policy) == "mc");
  CHECK(a.back().rate == 0.2);
  CHECK(*a.back().seed == 3);
}

TEST_CASE("single-cell sweep writes one data row") {
  const std::vector<Policy> policies{Policy::kLC};
  const std::vector<double> rates{0.1};
  const std::vector<std::uint64_t> seeds{0};
  const auto rows = run_sweep(sbm_data(), policies, rates, seeds, quick());
  const std::string text = csv(rows, true);
  CHECK(std::count(text.begin(), text.end(), '\n') == 2);
}

TEST_CASE("failing cells are recorded, the sweep continues") {
  const PreparedDataset no_scores = prepare_dataset(sbm_data().bundle, false);
  const std::vector<Policy> policies{Policy::kDF, Policy::kMC};
  const std::vector<double> rates{0.1};
  const std::vector<std::uint64_t> seeds{0};
  const auto rows = run_sweep(no_scores, policies, rates, seeds, quick());
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].status == "ok");
  CHECK(rows[1].status.find("needs centrality") != std::string::npos);
  CHECK(std::isnan(rows[1].accuracy));
}

TEST_CASE("stage names prefix propagated errors") {
  ExperimentOptions bad = quick();
  bad.train.lr = -1.0;
  try {
    run_cell(sbm_data(), Policy::kDF, 0.1, 0, bad);
    FAIL("expected failure");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).rfind("train: ", 0) == 0);
  }
}
