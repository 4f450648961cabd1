#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "stakemetrics/metrics.hpp"
#include "stakemetrics/model.hpp"
#include "stakemetrics/srsw.hpp"

namespace stakemetrics {

struct InvalidHorizonError : DomainError {
  using DomainError::DomainError;
};

struct RewardTrajectory {
  std::vector<std::string> addresses;            // canonical order
  std::vector<std::size_t> epochs;               // 0..T
  std::vector<std::vector<double>> stakes_by_validator;  // [validator][epoch]
};

struct ProposerHistogram {
  std::size_t draws = 0;
  std::uint64_t seed = 0;
  std::string rng_name = "mt19937_64";
  std::vector<std::string> addresses;
  std::vector<std::size_t> counts;
  std::vector<double> expected_share;
};

inline double per_epoch_alpha(double annual_rate_percent,
                              std::size_t epochs_per_year) {
  return annual_rate_percent / 100.0 / static_cast<double>(epochs_per_year);
}

// Compounds stakes epoch by epoch: s <- s + alpha * w(s) for every validator
// above the admission threshold. The threshold s_M is re-evaluated each epoch
// from the current stakes; when the cap does not bind (m <= M) no admission
// threshold applies and every validator earns.
inline RewardTrajectory simulate_rewards(
    const ValidatorSnapshot& snapshot, const EconParams& params,
    std::size_t epochs,
    std::optional<double> annual_rate_percent = std::nullopt,
    std::optional<std::size_t> epochs_per_year = std::nullopt) {
  if (epochs < 1) throw InvalidHorizonError{"epochs must be >= 1"};
  if (snapshot.validators.empty()) throw EmptySetError{};
  double alpha = params.alpha;
  if (annual_rate_percent) {
    if (!epochs_per_year || *epochs_per_year < 1)
      throw InvalidHorizonError{"annual rate given without epochs_per_year"};
    alpha = per_epoch_alpha(*annual_rate_percent, *epochs_per_year);
  }
  const std::size_t m = snapshot.validators.size();
  RewardTrajectory traj;
  traj.addresses.reserve(m);
  std::vector<double> cur;
  cur.reserve(m);
  for (const auto& v : snapshot.validators) {
    traj.addresses.push_back(v.address);
    cur.push_back(stake_to_double(v.stake));
  }
  traj.stakes_by_validator.assign(m, {});
  for (std::size_t i = 0; i < m; ++i) {
    traj.stakes_by_validator[i].reserve(epochs + 1);
    traj.stakes_by_validator[i].push_back(cur[i]);
  }
  traj.epochs.resize(epochs + 1);
  for (std::size_t t = 0; t <= epochs; ++t) traj.epochs[t] = t;

  for (std::size_t t = 1; t <= epochs; ++t) {
    double s_m = 0.0;
    if (m > params.cap_m) {
      std::vector<double> sorted = cur;
      std::nth_element(sorted.begin(), sorted.begin() + (params.cap_m - 1),
                       sorted.end(), std::greater<>{});
      s_m = sorted[params.cap_m - 1];
    }
    for (std::size_t i = 0; i < m; ++i) {
      if (cur[i] > s_m) {
        double w = params.scheme == WeightScheme::Srsw ? std::sqrt(cur[i])
                                                       : cur[i];
        cur[i] += alpha * w;
      }
      traj.stakes_by_validator[i].push_back(cur[i]);
    }
  }
  return traj;
}

// i.i.d. weight-proportional proposer draws with a fixed, named PRNG.
// Uniform doubles come straight from the raw 64-bit stream so the histogram
// is bit-reproducible for a given (seed, set, draws).
inline ProposerHistogram proposer_distribution(const WeightedSet& ws,
                                               std::size_t draws,
                                               std::uint64_t seed) {
  const std::size_t m = ws.size();
  if (m == 0) throw EmptySetError{};
  if (draws < 1) throw InvalidHorizonError{"draws must be >= 1"};
  ProposerHistogram h;
  h.draws = draws;
  h.seed = seed;
  h.counts.assign(m, 0);
  h.addresses.reserve(m);
  for (const auto& v : ws.snapshot.validators) h.addresses.push_back(v.address);
  std::vector<double> cum(m);
  double acc = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    acc += ws.weights[i];
    cum[i] = acc;
  }
  h.expected_share.resize(m);
  for (std::size_t i = 0; i < m; ++i) h.expected_share[i] = ws.weights[i] / acc;
  std::mt19937_64 rng(seed);
  for (std::size_t d = 0; d < draws; ++d) {
    double u = static_cast<double>(rng() >> 11) * 0x1.0p-53 * acc;
    auto it = std::upper_bound(cum.begin(), cum.end(), u);
    if (it == cum.end()) --it;
    ++h.counts[static_cast<std::size_t>(it - cum.begin())];
  }
  return h;
}

struct ProposerComparison {
  ProposerHistogram linear;
  ProposerHistogram srsw;
  double linear_share_gini = 0.0;
  double srsw_share_gini = 0.0;
};

inline ProposerComparison compare_proposer_concentration(
    const ValidatorSnapshot& snapshot, std::size_t draws, std::uint64_t seed) {
  ProposerComparison c;
  c.linear =
      proposer_distribution(apply_weights(snapshot, WeightScheme::Linear),
                            draws, seed);
  c.srsw = proposer_distribution(apply_weights(snapshot, WeightScheme::Srsw),
                                 draws, seed);
  c.linear_share_gini = gini_values(c.linear.expected_share);
  c.srsw_share_gini = gini_values(c.srsw.expected_share);
  return c;
}

inline void write_trajectory_csv(const RewardTrajectory& traj,
                                 std::ostream& os) {
  os.precision(17);  // lossless double round-trip
  os << "epoch,validator_address,stake\n";
  for (std::size_t t : traj.epochs) {
    for (std::size_t i = 0; i < traj.addresses.size(); ++i) {
      os << t << ',' << traj.addresses[i] << ','
         << traj.stakes_by_validator[i][t] << '\n';
    }
  }
}

inline void write_histogram_csv(const ProposerHistogram& h, std::ostream& os) {
  os << "validator_address,count,expected_share\n";
  for (std::size_t i = 0; i < h.addresses.size(); ++i) {
    os << h.addresses[i] << ',' << h.counts[i] << ',' << h.expected_share[i]
       << '\n';
  }
}

}  // namespace stakemetrics
