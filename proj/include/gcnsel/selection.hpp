#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gcnsel/centrality.hpp"
#include "gcnsel/graph.hpp"

namespace gcnsel {

// Label-selection policies: default stratified-random, most central, least
// central, and equal-combined (half most, half least central).
enum class Policy { kDF, kMC, kLC, kECM };

std::string_view policy_name(Policy p);  // "df" | "mc" | "lc" | "ecm"
// Throws std::invalid_argument for unknown names.
Policy parse_policy(std::string_view name);
bool needs_centrality(Policy p);

struct SelectOptions {
  // Apply MC/LC/ECM rankings within each class under per-class quotas.
  bool stratify = false;
};

/// Chooses `budget` training nodes. Result is sorted ascending.
///
/// MC/LC rank by centrality (descending/ascending), ties to the lower index.
/// ECM takes floor(budget/2) from the MC ranking, then fills the rest from the
/// LC ranking, skipping nodes already taken. DF draws budget/C nodes per class
/// uniformly at random (remainder to the lowest class indices); a class too
/// small for its quota spills the deficit round-robin to the other classes.
///
/// `scores` may be empty for DF. Throws std::invalid_argument for a budget
/// outside [1, num_nodes] or mismatched array lengths.
std::vector<Index> select_train_nodes(std::span<const double> scores,
                                      std::span<const Index> labels, Policy policy,
                                      Index budget, std::uint64_t seed,
                                      const SelectOptions& opts = {});

// round(rate * num_nodes), half-up.
Index budget_for_rate(double rate, Index num_nodes);

struct Split {
  std::vector<char> train_mask;
  std::vector<char> val_mask;
  std::vector<char> test_mask;
  Index budget = 0;
  double labeling_rate = 0.0;

  Index train_count() const;
  Index val_count() const;
  Index test_count() const;
};

// min(500, num_nodes / 10).
Index default_val_size(Index num_nodes);

// Validation is a seeded uniform draw of val_size non-training nodes; test is
// everything else. Throws std::invalid_argument when val_size exceeds the
// number of non-training nodes or train_nodes holds an invalid index.
Split make_split(const Graph& g, std::span<const Index> train_nodes, Index val_size,
                 std::uint64_t seed);

}  // namespace gcnsel
