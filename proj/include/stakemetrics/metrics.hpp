#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include "stakemetrics/model.hpp"

namespace stakemetrics {

struct OutOfRangeError : DomainError {
  using DomainError::DomainError;
};

// Absolute tolerance on normalized weights for square-root-scheme threshold
// tests; Linear mode never uses it (exact integer predicates).
inline constexpr double kWeightTolerance = 1e-9;

struct MetricsReport {
  std::size_t m = 0;
  double gini = 0.0;
  std::size_t nakamoto_liveness = 0;
  double rho_liveness = 0.0;
  std::size_t nakamoto_safety = 0;
  double rho_safety = 0.0;
  std::map<int, double> epsilon_by_delta;
};

// Standard discrete Gini over the weight vector, O(m log m) sorted form:
//   G = sum_i (2i - m - 1) x_(i) / (m * sum x),  x ascending, i = 1..m.
// Equivalent to the pairwise mean-absolute-difference form (kept as a test
// oracle) and to 1 - 2 * area under the trapezoid Lorenz curve.
inline double gini_values(std::vector<double> x) {
  const std::size_t m = x.size();
  if (m == 0) throw EmptySetError{};
  std::sort(x.begin(), x.end());
  if (x.front() == x.back()) return 0.0;  // equal weights, exactly zero
  double num = 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    num += (2.0 * static_cast<double>(i + 1) - static_cast<double>(m) - 1.0) * x[i];
    sum += x[i];
  }
  double g = num / (static_cast<double>(m) * sum);
  return std::clamp(g, 0.0, 1.0);
}

inline double gini(const WeightedSet& ws) { return gini_values(ws.weights); }

// m+1 points from (0,0) to (1,1); x = cumulative validator fraction in
// ascending-weight order, y = cumulative weight fraction.
inline std::vector<std::pair<double, double>> lorenz_points(
    const WeightedSet& ws) {
  const std::size_t m = ws.size();
  if (m == 0) throw EmptySetError{};
  std::vector<double> x = ws.weights;
  std::sort(x.begin(), x.end());
  double total = 0.0;
  for (double w : x) total += w;
  std::vector<std::pair<double, double>> pts;
  pts.reserve(m + 1);
  pts.emplace_back(0.0, 0.0);
  double cum = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    cum += x[i];
    pts.emplace_back(static_cast<double>(i + 1) / static_cast<double>(m),
                     cum / total);
  }
  pts.back() = {1.0, 1.0};
  return pts;
}

namespace detail {

// Greedy minimal prefix of the canonical (descending) order whose weight
// reaches num/den of the total. Greedy is optimal: the k largest weights
// maximize any k-subset sum. Linear runs on exact integers.
inline std::size_t nakamoto_greedy(const WeightedSet& ws, int num, int den) {
  const std::size_t m = ws.size();
  if (m == 0) throw EmptySetError{};
  if (ws.scheme == WeightScheme::Linear) {
    Stake total = 0;
    for (const auto& v : ws.snapshot.validators) total += v.stake;
    Stake cum = 0;
    for (std::size_t k = 0; k < m; ++k) {
      cum += ws.snapshot.validators[k].stake;
      if (den * cum >= num * total) return k + 1;
    }
  } else {
    const double frac = static_cast<double>(num) / static_cast<double>(den);
    double cum = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      cum += ws.weights[k];
      if (cum / ws.total_weight >= frac - kWeightTolerance) return k + 1;
    }
  }
  return m;
}

}  // namespace detail

// Smallest validator subset whose weight reaches 1/3 of the total: enough to
// halt block production.
inline std::size_t nakamoto_liveness(const WeightedSet& ws) {
  return detail::nakamoto_greedy(ws, 1, 3);
}

// Smallest subset whose weight forms a 2/3 quorum: enough to rewrite the
// ledger.
inline std::size_t nakamoto_safety(const WeightedSet& ws) {
  return detail::nakamoto_greedy(ws, 2, 3);
}

inline double scale_nakamoto(std::size_t n, std::size_t m) {
  if (n < 1 || m < 1 || n > m)
    throw OutOfRangeError{"scale_nakamoto requires 1 <= n <= m"};
  return static_cast<double>(n) / static_cast<double>(m) * 100.0;
}

// Weight disparity: eps = w_max / w_delta - 1 where w_delta is the weight at
// ascending-order index floor(delta/100 * (m-1)).
inline double epsilon(const WeightedSet& ws, int delta) {
  const std::size_t m = ws.size();
  if (m == 0) throw EmptySetError{};
  if (delta < 0 || delta > 100)
    throw OutOfRangeError{"delta must be an integer percent in [0,100]"};
  std::vector<double> x = ws.weights;
  std::sort(x.begin(), x.end());
  if (x.front() == x.back()) return 0.0;
  auto idx = static_cast<std::size_t>(
      delta / 100.0 * static_cast<double>(m - 1));
  return x.back() / x[idx] - 1.0;
}

inline MetricsReport full_report(const WeightedSet& ws,
                                 const std::vector<int>& deltas = {0, 50}) {
  MetricsReport r;
  r.m = ws.size();
  r.gini = gini(ws);
  r.nakamoto_liveness = nakamoto_liveness(ws);
  r.nakamoto_safety = nakamoto_safety(ws);
  r.rho_liveness = scale_nakamoto(r.nakamoto_liveness, r.m);
  r.rho_safety = scale_nakamoto(r.nakamoto_safety, r.m);
  for (int d : deltas) r.epsilon_by_delta[d] = epsilon(ws, d);
  return r;
}

}  // namespace stakemetrics
