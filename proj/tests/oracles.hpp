// Independent oracles used by the unit and acceptance suites. These stay
// brute-force on purpose: they must not share a code path with the
// implementations they check.
#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "stakemetrics/model.hpp"

namespace oracles {

// O(m^2) pairwise mean-absolute-difference Gini.
inline double gini_pairwise(const std::vector<double>& w) {
  const std::size_t m = w.size();
  double num = 0.0, sum = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sum += w[i];
    for (std::size_t j = 0; j < m; ++j) num += std::fabs(w[i] - w[j]);
  }
  if (sum == 0.0) return 0.0;
  return num / (2.0 * static_cast<double>(m) * sum);
}

// Gini as 1 - 2 * trapezoid area under a Lorenz polyline.
inline double gini_from_lorenz(
    const std::vector<std::pair<double, double>>& pts) {
  double area = 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    area += (pts[i].first - pts[i - 1].first) *
            (pts[i].second + pts[i - 1].second) / 2.0;
  }
  return 1.0 - 2.0 * area;
}

// Exhaustive minimum-cardinality subset reaching `frac` of the total weight.
// Only usable for small m (2^m subsets).
inline std::size_t exhaustive_nakamoto(const std::vector<double>& w,
                                       double frac, double tol = 0.0) {
  const std::size_t m = w.size();
  double total = 0.0;
  for (double x : w) total += x;
  std::size_t best = m;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << m); ++mask) {
    double sum = 0.0;
    std::size_t card = 0;
    for (std::size_t i = 0; i < m; ++i) {
      if (mask & (std::uint64_t{1} << i)) {
        sum += w[i];
        ++card;
      }
    }
    if (card < best && sum / total >= frac - tol) best = card;
  }
  return best;
}

// Exact-integer exhaustive variant: den * sum >= num * total.
inline std::size_t exhaustive_nakamoto_int(
    const std::vector<stakemetrics::Stake>& s, int num, int den) {
  const std::size_t m = s.size();
  stakemetrics::Stake total = 0;
  for (const auto& x : s) total += x;
  std::size_t best = m;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << m); ++mask) {
    stakemetrics::Stake sum = 0;
    std::size_t card = 0;
    for (std::size_t i = 0; i < m; ++i) {
      if (mask & (std::uint64_t{1} << i)) {
        sum += s[i];
        ++card;
      }
    }
    if (card < best && den * sum >= num * total) best = card;
  }
  return best;
}

// Random snapshot: m validators, stakes log-uniform over [1, 10^max_exp].
inline stakemetrics::ValidatorSnapshot random_snapshot(std::mt19937_64& rng,
                                                       std::size_t m,
                                                       double max_exp = 12.0) {
  stakemetrics::ValidatorSnapshot snap;
  snap.chain = "random";
  snap.captured_at = "2023-12-14T00:00:00Z";
  std::uniform_real_distribution<double> exp_dist(0.0, max_exp);
  for (std::size_t i = 0; i < m; ++i) {
    double s = std::pow(10.0, exp_dist(rng));
    stakemetrics::Validator v;
    char buf[32];
    std::snprintf(buf, sizeof buf, "val%05zu", i);
    v.address = buf;
    v.stake = stakemetrics::Stake{static_cast<std::uint64_t>(s) + 1};
    snap.validators.push_back(std::move(v));
  }
  return stakemetrics::canonicalize(std::move(snap));
}

}  // namespace oracles
