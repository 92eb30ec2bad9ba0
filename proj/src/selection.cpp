#include "gcnsel/selection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "gcnsel/log.hpp"
#include "gcnsel/rng.hpp"

namespace gcnsel {
namespace {

void shuffle(std::vector<Index>& v, SplitMix64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.uniform_below(i));
    std::swap(v[i - 1], v[j]);
  }
}

// floor(budget/2) nodes from the MC ranking, the rest from the LC ranking
// skipping nodes already taken.
std::vector<Index> combine_ecm(const std::vector<Index>& mc, const std::vector<Index>& lc,
                               Index budget, Index universe) {
  std::vector<char> taken(universe, 0);
  std::vector<Index> out;
  const Index from_mc = budget / 2;
  for (Index k = 0; k < from_mc; ++k) {
    out.push_back(mc[k]);
    taken[mc[k]] = 1;
  }
  for (Index v : lc) {
    if (static_cast<Index>(out.size()) == budget) break;
    if (!taken[v]) {
      out.push_back(v);
      taken[v] = 1;
    }
  }
  return out;
}

std::vector<Index> take_ranked(Policy policy, std::span<const double> scores,
                               const std::vector<Index>& candidates, Index budget,
                               Index universe) {
  auto mc = candidates;
  std::stable_sort(mc.begin(), mc.end(), [&](Index a, Index b) {
    return scores[a] > scores[b] || (scores[a] == scores[b] && a < b);
  });
  auto lc = candidates;
  std::stable_sort(lc.begin(), lc.end(), [&](Index a, Index b) {
    return scores[a] < scores[b] || (scores[a] == scores[b] && a < b);
  });
  switch (policy) {
    case Policy::kMC: mc.resize(budget); return mc;
    case Policy::kLC: lc.resize(budget); return lc;
    case Policy::kECM: return combine_ecm(mc, lc, budget, universe);
    case Policy::kDF: break;
  }
  throw std::logic_error("take_ranked: DF is not a ranking policy");
}

// Per-class quotas of a stratified budget; deficits of small classes spill
// round-robin to classes with spare members.
std::vector<Index> class_quotas(const std::vector<std::vector<Index>>& members,
                                Index budget) {
  const auto num_classes = static_cast<Index>(members.size());
  std::vector<Index> quota(num_classes, budget / num_classes);
  for (Index c = 0; c < budget % num_classes; ++c) ++quota[c];

  Index deficit = 0;
  for (Index c = 0; c < num_classes; ++c) {
    const auto size = static_cast<Index>(members[c].size());
    if (quota[c] > size) {
      warn("class " + std::to_string(c) + " has " + std::to_string(size) +
           " nodes but a quota of " + std::to_string(quota[c]) +
           "; spilling the remainder to other classes");
      deficit += quota[c] - size;
      quota[c] = size;
    }
  }
  while (deficit > 0) {
    bool progressed = false;
    for (Index c = 0; c < num_classes && deficit > 0; ++c) {
      if (quota[c] < static_cast<Index>(members[c].size())) {
        ++quota[c];
        --deficit;
        progressed = true;
      }
    }
    if (!progressed) throw std::logic_error("class_quotas: budget exceeds node count");
  }
  return quota;
}

}  // namespace

std::string_view policy_name(Policy p) {
  switch (p) {
    case Policy::kDF: return "df";
    case Policy::kMC: return "mc";
    case Policy::kLC: return "lc";
    case Policy::kECM: return "ecm";
  }
  return "?";
}

Policy parse_policy(std::string_view name) {
  if (name == "df") return Policy::kDF;
  if (name == "mc") return Policy::kMC;
  if (name == "lc") return Policy::kLC;
  if (name == "ecm") return Policy::kECM;
  throw std::invalid_argument("unknown policy '" + std::string(name) +
                              "' (expected df, mc, lc or ecm)");
}

bool needs_centrality(Policy p) { return p != Policy::kDF; }

std::vector<Index> select_train_nodes(std::span<const double> scores,
                                      std::span<const Index> labels, Policy policy,
                                      Index budget, std::uint64_t seed,
                                      const SelectOptions& opts) {
  const auto n = static_cast<Index>(labels.size());
  if (budget < 1 || budget > n) {
    throw std::invalid_argument("select_train_nodes: budget " + std::to_string(budget) +
                                " outside [1, " + std::to_string(n) + "]");
  }
  if (needs_centrality(policy) && static_cast<Index>(scores.size()) != n) {
    throw std::invalid_argument("select_train_nodes: " + std::to_string(scores.size()) +
                                " scores for " + std::to_string(n) + " labels");
  }

  std::vector<Index> chosen;
  if (policy != Policy::kDF && !opts.stratify) {
    std::vector<Index> all(n);
    std::iota(all.begin(), all.end(), Index{0});
    chosen = take_ranked(policy, scores, all, budget, n);
  } else {
    const Index num_classes = *std::max_element(labels.begin(), labels.end()) + 1;
    std::vector<std::vector<Index>> members(num_classes);
    for (Index i = 0; i < n; ++i) {
      if (labels[i] < 0) throw std::invalid_argument("select_train_nodes: negative label");
      members[labels[i]].push_back(i);
    }
    const auto quota = class_quotas(members, budget);
    SplitMix64 rng = stream_rng(seed, Stream::kSelection);
    for (Index c = 0; c < num_classes; ++c) {
      if (quota[c] == 0) continue;
      std::vector<Index> picked;
      if (policy == Policy::kDF) {
        picked = members[c];
        shuffle(picked, rng);
        picked.resize(quota[c]);
      } else {
        picked = take_ranked(policy, scores, members[c], quota[c], n);
      }
      chosen.insert(chosen.end(), picked.begin(), picked.end());
    }
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

Index budget_for_rate(double rate, Index num_nodes) {
  if (!(rate > 0.0) || rate > 1.0) {
    throw std::invalid_argument("labeling rate must lie in (0, 1], got " +
                                std::to_string(rate));
  }
  const auto budget = static_cast<Index>(std::floor(rate * static_cast<double>(num_nodes) + 0.5));
  return std::clamp<Index>(budget, 1, num_nodes);
}

Index Split::train_count() const { return std::count(train_mask.begin(), train_mask.end(), 1); }
Index Split::val_count() const { return std::count(val_mask.begin(), val_mask.end(), 1); }
Index Split::test_count() const { return std::count(test_mask.begin(), test_mask.end(), 1); }

Index default_val_size(Index num_nodes) { return std::min<Index>(500, num_nodes / 10); }

Split make_split(const Graph& g, std::span<const Index> train_nodes, Index val_size,
                 std::uint64_t seed) {
  const Index n = g.num_nodes();
  Split s;
  s.train_mask.assign(n, 0);
  for (Index v : train_nodes) {
    if (v < 0 || v >= n) {
      throw std::invalid_argument("make_split: train node " + std::to_string(v) +
                                  " out of range");
    }
    s.train_mask[v] = 1;
  }
  s.budget = s.train_count();
  s.labeling_rate = n > 0 ? static_cast<double>(s.budget) / static_cast<double>(n) : 0.0;

  std::vector<Index> rest;
  for (Index i = 0; i < n; ++i) {
    if (!s.train_mask[i]) rest.push_back(i);
  }
  if (val_size < 0 || val_size > static_cast<Index>(rest.size())) {
    throw std::invalid_argument("make_split: val_size " + std::to_string(val_size) +
                                " exceeds the " + std::to_string(rest.size()) +
                                " non-training nodes");
  }
  SplitMix64 rng = stream_rng(seed, Stream::kSplit);
  shuffle(rest, rng);
  s.val_mask.assign(n, 0);
  s.test_mask.assign(n, 0);
  for (std::size_t k = 0; k < rest.size(); ++k) {
    (static_cast<Index>(k) < val_size ? s.val_mask : s.test_mask)[rest[k]] = 1;
  }
  return s;
}

}  // namespace gcnsel
