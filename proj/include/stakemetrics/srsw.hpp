#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "stakemetrics/metrics.hpp"
#include "stakemetrics/model.hpp"

namespace stakemetrics {

struct IndexError : DomainError {
  using DomainError::DomainError;
};

struct EconParams {
  double alpha = 0.0;       // per-epoch inflation factor, fractional
  std::size_t cap_m = 1;    // validator-set cardinality cap M
  double sybil_cost = 0.0;  // C, reward units per epoch
  WeightScheme scheme = WeightScheme::Linear;
};

struct QuorumThreshold {
  WeightScheme scheme = WeightScheme::Linear;
  double threshold = 0.0;  // 2/3 of total weight
  double total_weight = 0.0;

  // Exact predicate for Linear mode: 3 * subset_stake >= 2 * total_stake.
  Stake total_stake = 0;
  bool meets_exact(const Stake& subset_stake) const {
    return 3 * subset_stake >= 2 * total_stake;
  }
};

inline QuorumThreshold quorum_threshold(const WeightedSet& ws) {
  if (ws.size() == 0) throw EmptySetError{};
  QuorumThreshold q;
  q.scheme = ws.scheme;
  q.total_weight = ws.total_weight;
  q.threshold = 2.0 / 3.0 * ws.total_weight;
  for (const auto& v : ws.snapshot.validators) q.total_stake += v.stake;
  return q;
}

// True iff the subset's weight reaches the 2/3 quorum. For uniform weights
// this reduces to the plain count rule |subset| >= ceil(2m/3).
inline bool meets_quorum(const WeightedSet& ws,
                         const std::vector<std::size_t>& subset) {
  std::vector<std::size_t> idx = subset;
  std::sort(idx.begin(), idx.end());
  if (std::adjacent_find(idx.begin(), idx.end()) != idx.end())
    throw IndexError{"duplicate index in subset"};
  if (!idx.empty() && idx.back() >= ws.size())
    throw IndexError{"validator index out of range"};
  const QuorumThreshold q = quorum_threshold(ws);
  if (ws.scheme == WeightScheme::Linear) {
    Stake sum = 0;
    for (std::size_t i : idx) sum += ws.snapshot.validators[i].stake;
    return q.meets_exact(sum);
  }
  double sum = 0.0;
  for (std::size_t i : idx) sum += ws.weights[i];
  return sum / ws.total_weight >= 2.0 / 3.0 - kWeightTolerance;
}

struct TopMSelection {
  ValidatorSnapshot selected;
  Stake threshold_stake;  // s_M: stake of the last admitted validator
};

// Admission rule: keep the min(cap, m) highest-staked candidates; s_M is the
// stake of the last one in. Rejected candidates earn zero reward.
inline TopMSelection select_top_m(const ValidatorSnapshot& candidates,
                                  std::size_t cap_m) {
  if (candidates.validators.empty()) throw EmptySetError{};
  TopMSelection out;
  out.selected = candidates;
  const std::size_t keep = std::min(cap_m, candidates.validators.size());
  out.selected.validators.resize(keep);
  out.threshold_stake = out.selected.validators.back().stake;
  return out;
}

// Per-epoch reward: alpha * w(s) if s > s_M, else 0. The boundary validator
// (s == s_M) earns nothing; the admission inequality is strict.
inline double reward(const Stake& stake, const EconParams& params,
                     const Stake& threshold_stake) {
  if (stake <= threshold_stake) return 0.0;
  double w = stake_to_double(stake);
  if (params.scheme == WeightScheme::Srsw) w = std::sqrt(w);
  return params.alpha * w;
}

struct SplitVerdict {
  double single_reward = 0.0;
  double best_split_reward = 0.0;  // net of Sybil cost C
  Stake best_split_a = 0;
  Stake best_split_b = 0;
  bool rational_to_split = false;
};

// Evaluates whether fragmenting one stake into two identities pays off:
// max over (a, b), a + b = stake, of reward(a) + reward(b) - C versus
// reward(stake). Enumerates at 1-base-unit granularity; for stakes too large
// to enumerate, only the candidate splits that can be optimal are checked
// (the even split, and the splits hugging the admission threshold).
inline SplitVerdict sybil_split_analysis(const Stake& stake,
                                         const EconParams& params,
                                         const Stake& threshold_stake) {
  if (stake < 1) throw DomainError{"stake must be >= 1"};
  // Admission inside the split analysis is non-strict (a part with
  // s == s_M still earns): the rationality comparison treats the threshold
  // stake as the minimum capital requirement, not an exclusion.
  auto part_reward = [&](const Stake& s) {
    if (s < threshold_stake) return 0.0;
    double w = stake_to_double(s);
    if (params.scheme == WeightScheme::Srsw) w = std::sqrt(w);
    return params.alpha * w;
  };
  SplitVerdict v;
  v.single_reward = part_reward(stake);
  v.best_split_reward = -params.sybil_cost;  // degenerate: no reward at all
  v.best_split_a = stake;
  v.best_split_b = 0;
  auto consider = [&](const Stake& a) {
    if (a < 1 || a > stake - 1) return;
    Stake b = stake - a;
    double r = part_reward(a) + part_reward(b) - params.sybil_cost;
    if (r > v.best_split_reward) {
      v.best_split_reward = r;
      v.best_split_a = a;
      v.best_split_b = b;
    }
  };
  static const Stake kEnumLimit = 2'000'000;
  if (stake <= kEnumLimit) {
    for (Stake a = 1; 2 * a <= stake; ++a) consider(a);
  } else {
    // Linear: any split with both sides above s_M is reward-neutral;
    // Srsw: sqrt(a) + sqrt(b) is maximized at the even split. Below the
    // threshold a side contributes 0, so the other extreme is giving one
    // side the minimum admissible stake.
    consider(stake / 2);
    consider(stake / 2 + 1);
    consider(Stake{1});
    consider(threshold_stake);
    consider(stake - threshold_stake);
  }
  v.rational_to_split = v.best_split_reward > v.single_reward;
  return v;
}

}  // namespace stakemetrics
