#pragma once

#include <chrono>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "stakemetrics/model.hpp"

namespace stakemetrics {

struct SchemaError : DomainError {
  std::string field;
  SchemaError(std::string f, const std::string& reason)
      : DomainError("schema error in '" + f + "': " + reason),
        field(std::move(f)) {}
};

struct NegativeStakeError : DomainError {
  std::string address;
  explicit NegativeStakeError(std::string addr)
      : DomainError("negative stake for validator: " + addr),
        address(std::move(addr)) {}
};

struct IOError : DomainError {
  using DomainError::DomainError;
};

struct NetworkError : DomainError {
  using DomainError::DomainError;
};

struct PaginationError : NetworkError {
  using NetworkError::NetworkError;
};

struct MalformedResponseError : NetworkError {
  using NetworkError::NetworkError;
};

inline constexpr int kSnapshotSchemaVersion = 1;

namespace detail {

// Decimal string -> exact integer. Rejects anything that is not
// [-]?[0-9]+ so arbitrary input bytes surface as typed errors.
inline Stake parse_stake(std::string_view text, const std::string& address) {
  if (text.empty())
    throw SchemaError{"stake", "empty stake for " + address};
  std::size_t start = 0;
  bool negative = false;
  if (text[0] == '-') {
    negative = true;
    start = 1;
  }
  if (start == text.size())
    throw SchemaError{"stake", "no digits in stake for " + address};
  for (std::size_t i = start; i < text.size(); ++i) {
    if (text[i] < '0' || text[i] > '9')
      throw SchemaError{"stake", "non-digit in stake for " + address};
  }
  if (negative) throw NegativeStakeError{address};
  Stake s{std::string(text)};
  if (s == 0) throw SchemaError{"stake", "zero stake for " + address};
  return s;
}

inline ValidatorSnapshot parse_json_snapshot(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError{"document", e.what()};
  }
  if (!doc.is_object()) throw SchemaError{"document", "not an object"};
  if (!doc.contains("schema_version") ||
      !doc["schema_version"].is_number_integer() ||
      doc["schema_version"].get<int>() != kSnapshotSchemaVersion)
    throw SchemaError{"schema_version", "missing or unsupported"};
  ValidatorSnapshot snap;
  if (!doc.contains("chain") || !doc["chain"].is_string())
    throw SchemaError{"chain", "missing or not a string"};
  snap.chain = doc["chain"].get<std::string>();
  if (!doc.contains("captured_at") || !doc["captured_at"].is_string())
    throw SchemaError{"captured_at", "missing or not a string"};
  snap.captured_at = doc["captured_at"].get<std::string>();
  if (!doc.contains("validators") || !doc["validators"].is_array())
    throw SchemaError{"validators", "missing or not an array"};
  for (const auto& entry : doc["validators"]) {
    if (!entry.is_object() || !entry.contains("address") ||
        !entry["address"].is_string() || !entry.contains("stake") ||
        !entry["stake"].is_string())
      throw SchemaError{"validators", "entry needs string address and stake"};
    Validator v;
    v.address = entry["address"].get<std::string>();
    if (v.address.empty()) throw SchemaError{"address", "empty address"};
    v.stake = parse_stake(entry["stake"].get<std::string>(), v.address);
    if (entry.contains("moniker")) {
      if (!entry["moniker"].is_string())
        throw SchemaError{"moniker", "not a string"};
      v.moniker = entry["moniker"].get<std::string>();
    }
    snap.validators.push_back(std::move(v));
  }
  return snap;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

inline ValidatorSnapshot parse_csv_snapshot(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line))
    throw SchemaError{"document", "empty input"};
  auto header = split_csv_line(line);
  if (header.size() < 2 || header[0] != "address" || header[1] != "stake")
    throw SchemaError{"header", "expected 'address,stake[,moniker]'"};
  ValidatorSnapshot snap;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    auto fields = split_csv_line(line);
    if (fields.size() < 2 || fields.size() > 3)
      throw SchemaError{"row", "expected 2 or 3 fields"};
    Validator v;
    v.address = fields[0];
    if (v.address.empty()) throw SchemaError{"address", "empty address"};
    v.stake = parse_stake(fields[1], v.address);
    if (fields.size() == 3 && !fields[2].empty()) v.moniker = fields[2];
    snap.validators.push_back(std::move(v));
  }
  return snap;
}

}  // namespace detail

// Total over arbitrary bytes: every input yields a canonical snapshot or a
// typed DomainError. Format sniffing: leading '{' means the JSON document
// schema, anything else is tried as CSV.
inline ValidatorSnapshot parse_snapshot(const std::string& bytes) {
  std::size_t i = 0;
  while (i < bytes.size() &&
         (bytes[i] == ' ' || bytes[i] == '\t' || bytes[i] == '\n' ||
          bytes[i] == '\r'))
    ++i;
  ValidatorSnapshot snap;
  try {
    if (i < bytes.size() && bytes[i] == '{')
      snap = detail::parse_json_snapshot(bytes);
    else
      snap = detail::parse_csv_snapshot(bytes);
  } catch (const DomainError&) {
    throw;
  } catch (const std::exception& e) {
    throw SchemaError{"document", e.what()};
  }
  return canonicalize(std::move(snap));
}

inline ValidatorSnapshot load_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IOError{"cannot open " + path};
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_snapshot(buf.str());
}

inline nlohmann::json snapshot_to_json(const ValidatorSnapshot& snapshot) {
  nlohmann::json doc;
  doc["schema_version"] = kSnapshotSchemaVersion;
  doc["chain"] = snapshot.chain;
  doc["captured_at"] = snapshot.captured_at;
  doc["validators"] = nlohmann::json::array();
  for (const auto& v : snapshot.validators) {
    nlohmann::json entry;
    entry["address"] = v.address;
    entry["stake"] = v.stake.str();  // decimal string, never truncated
    if (v.moniker) entry["moniker"] = *v.moniker;
    doc["validators"].push_back(std::move(entry));
  }
  return doc;
}

inline void write_snapshot(const ValidatorSnapshot& snapshot,
                           const std::string& path) {
  if (snapshot.validators.empty()) throw EmptySetError{};
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IOError{"cannot open " + path + " for writing"};
  out << snapshot_to_json(snapshot).dump(1) << '\n';
  if (!out) throw IOError{"write failed: " + path};
}

// Cosmos-SDK staking REST shape: paginated list of bonded validators with
// token balances. Other chains are supported through file fixtures.
struct ChainAdapter {
  std::string name = "cosmos";
  std::string endpoint_url;  // e.g. http://host:1317
  std::string path = "/cosmos/staking/v1beta1/validators";
  std::size_t pagination_limit = 100;
  int timeout_seconds = 10;
  int max_attempts = 3;
  std::chrono::milliseconds backoff_base{250};
};

inline ValidatorSnapshot fetch_validators(const ChainAdapter& adapter) {
  httplib::Client client(adapter.endpoint_url);
  client.set_connection_timeout(adapter.timeout_seconds, 0);
  client.set_read_timeout(adapter.timeout_seconds, 0);

  auto get_with_retry = [&](const std::string& url) {
    for (int attempt = 0; attempt < adapter.max_attempts; ++attempt) {
      if (attempt > 0)
        std::this_thread::sleep_for(adapter.backoff_base * (1 << (attempt - 1)));
      auto res = client.Get(url);
      if (res && res->status == 200) return res->body;
      if (res && res->status >= 400 && res->status < 500)
        throw NetworkError{"HTTP " + std::to_string(res->status) + " for " + url};
    }
    throw NetworkError{"request failed after " +
                       std::to_string(adapter.max_attempts) + " attempts: " + url};
  };

  ValidatorSnapshot snap;
  snap.chain = adapter.name;
  {
    auto now = std::chrono::system_clock::now();
    std::time_t tt = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&tt));
    snap.captured_at = buf;
  }
  std::string next_key;
  std::size_t pages = 0;
  while (true) {
    if (++pages > 10000) throw PaginationError{"pagination does not terminate"};
    std::string url = adapter.path +
                      "?status=BOND_STATUS_BONDED&pagination.limit=" +
                      std::to_string(adapter.pagination_limit);
    if (!next_key.empty())
      url += "&pagination.key=" + httplib::detail::encode_query_param(next_key);
    const std::string body = get_with_retry(url);
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(body);
    } catch (const nlohmann::json::exception& e) {
      throw MalformedResponseError{std::string("bad JSON page: ") + e.what()};
    }
    if (!doc.contains("validators") || !doc["validators"].is_array())
      throw MalformedResponseError{"page without validators array"};
    for (const auto& entry : doc["validators"]) {
      if (!entry.contains("operator_address") ||
          !entry["operator_address"].is_string() ||
          !entry.contains("tokens") || !entry["tokens"].is_string())
        throw MalformedResponseError{"validator entry missing fields"};
      Validator v;
      v.address = entry["operator_address"].get<std::string>();
      try {
        v.stake = detail::parse_stake(entry["tokens"].get<std::string>(),
                                      v.address);
      } catch (const DomainError& e) {
        throw MalformedResponseError{e.what()};
      }
      if (entry.contains("description") && entry["description"].is_object() &&
          entry["description"].contains("moniker") &&
          entry["description"]["moniker"].is_string())
        v.moniker = entry["description"]["moniker"].get<std::string>();
      snap.validators.push_back(std::move(v));
    }
    next_key.clear();
    if (doc.contains("pagination") && doc["pagination"].is_object() &&
        doc["pagination"].contains("next_key") &&
        doc["pagination"]["next_key"].is_string())
      next_key = doc["pagination"]["next_key"].get<std::string>();
    if (next_key.empty()) break;
  }
  if (snap.validators.empty()) throw MalformedResponseError{"no bonded validators"};
  return canonicalize(std::move(snap));
}

}  // namespace stakemetrics
