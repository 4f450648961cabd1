#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace stakemetrics {

// Stakes are exact base-unit token counts. Real chains report 10^18-scale
// values, so arbitrary precision end-to-end; no floating conversion happens
// until a weight scheme is applied.
using Stake = boost::multiprecision::cpp_int;

struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EmptySetError : DomainError {
  EmptySetError() : DomainError("validator set is empty") {}
};

struct DuplicateAddressError : DomainError {
  std::string address;
  explicit DuplicateAddressError(std::string addr)
      : DomainError("duplicate validator address: " + addr),
        address(std::move(addr)) {}
};

struct Validator {
  std::string address;
  Stake stake;
  std::optional<std::string> moniker;

  bool operator==(const Validator&) const = default;
};

struct ValidatorSnapshot {
  std::string chain;
  std::string captured_at;  // ISO-8601 UTC
  std::vector<Validator> validators;

  std::size_t size() const { return validators.size(); }
  bool operator==(const ValidatorSnapshot&) const = default;
};

enum class WeightScheme { Linear, Srsw };

inline const char* to_string(WeightScheme s) {
  return s == WeightScheme::Linear ? "linear" : "srsw";
}

// Canonical order: stake descending, address ascending on ties. Every
// downstream computation assumes this order, so reports are deterministic
// regardless of input order.
inline ValidatorSnapshot canonicalize(ValidatorSnapshot snapshot) {
  if (snapshot.validators.empty()) throw EmptySetError{};
  std::stable_sort(snapshot.validators.begin(), snapshot.validators.end(),
                   [](const Validator& a, const Validator& b) {
                     if (a.stake != b.stake) return a.stake > b.stake;
                     return a.address < b.address;
                   });
  std::vector<std::string> addrs;
  addrs.reserve(snapshot.validators.size());
  for (const auto& v : snapshot.validators) addrs.push_back(v.address);
  std::sort(addrs.begin(), addrs.end());
  auto dup = std::adjacent_find(addrs.begin(), addrs.end());
  if (dup != addrs.end()) throw DuplicateAddressError{*dup};
  return snapshot;
}

inline double stake_to_double(const Stake& s) {
  return s.convert_to<double>();
}

// A snapshot with a weight scheme applied. Weights are doubles for metric
// math; Linear-mode threshold predicates go back to the exact integer stakes
// (see srsw.hpp) so the Nakamoto subset boundary never depends on rounding.
struct WeightedSet {
  ValidatorSnapshot snapshot;
  WeightScheme scheme = WeightScheme::Linear;
  std::vector<double> weights;  // aligned with snapshot.validators
  double total_weight = 0.0;

  std::size_t size() const { return snapshot.validators.size(); }
};

inline WeightedSet apply_weights(ValidatorSnapshot snapshot,
                                 WeightScheme scheme) {
  if (snapshot.validators.empty()) throw EmptySetError{};
  WeightedSet ws;
  ws.scheme = scheme;
  ws.weights.reserve(snapshot.validators.size());
  double total = 0.0;
  for (const auto& v : snapshot.validators) {
    double w = stake_to_double(v.stake);
    if (scheme == WeightScheme::Srsw) w = std::sqrt(w);
    ws.weights.push_back(w);
    total += w;
  }
  ws.total_weight = total;
  ws.snapshot = std::move(snapshot);
  return ws;
}

}  // namespace stakemetrics
