#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <random>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "oracles.hpp"
#include "stakemetrics/ingest.hpp"

using namespace stakemetrics;

TEST_CASE("parse json snapshot happy path") {
  std::string doc = R"({
    "schema_version": 1,
    "chain": "testnet",
    "captured_at": "2023-12-14T00:00:00Z",
    "validators": [
      {"address": "a1", "stake": "100", "moniker": "one"},
      {"address": "a2", "stake": "50"}
    ]
  })";
  auto snap = parse_snapshot(doc);
  REQUIRE(snap.chain == "testnet");
  REQUIRE(snap.validators.size() == 2);
  REQUIRE(snap.validators[0].address == "a1");
  REQUIRE(snap.validators[0].stake == 100);
  REQUIRE(snap.validators[0].moniker == "one");
}

TEST_CASE("parse csv snapshot") {
  auto snap = parse_snapshot("address,stake,moniker\nb,50,\na,100,alpha\n");
  REQUIRE(snap.validators.size() == 2);
  REQUIRE(snap.validators[0].address == "a");  // canonical order
  REQUIRE(snap.validators[0].moniker == "alpha");
  REQUIRE_FALSE(snap.validators[1].moniker.has_value());
}

TEST_CASE("parse errors are typed") {
  REQUIRE_THROWS_AS(parse_snapshot("address,stake\nx,-5\n"),
                    NegativeStakeError);
  REQUIRE_THROWS_AS(parse_snapshot("address,stake\nx,5\nx,2\n"),
                    DuplicateAddressError);
  REQUIRE_THROWS_AS(parse_snapshot("address,stake\n"), EmptySetError);
  REQUIRE_THROWS_AS(parse_snapshot("{\"schema_version\": 2}"), SchemaError);
  REQUIRE_THROWS_AS(parse_snapshot("{not json"), SchemaError);
  REQUIRE_THROWS_AS(parse_snapshot("address,stake\nx,12x4\n"), SchemaError);
  REQUIRE_THROWS_AS(parse_snapshot("address,stake\nx,0\n"), SchemaError);
  REQUIRE_THROWS_AS(parse_snapshot(""), SchemaError);
}

TEST_CASE("parse_snapshot never crashes on random bytes") {
  std::mt19937_64 rng(59);
  for (int i = 0; i < 2000; ++i) {
    std::string bytes;
    std::size_t len = rng() % 200;
    for (std::size_t k = 0; k < len; ++k)
      bytes.push_back(static_cast<char>(rng() & 0xff));
    try {
      parse_snapshot(bytes);
    } catch (const DomainError&) {
      // expected: every malformed input maps to a typed error
    }
  }
}

TEST_CASE("snapshot round-trips through disk, including huge stakes") {
  ValidatorSnapshot snap;
  snap.chain = "bigstake";
  snap.captured_at = "2023-12-14T00:00:00Z";
  snap.validators = {
      {"whale", Stake{"1000000000000000000000000000000"}, "big"},  // 10^30
      {"shrimp", Stake{7}, std::nullopt}};
  snap = canonicalize(snap);

  auto path = std::filesystem::temp_directory_path() / "sm_roundtrip.json";
  write_snapshot(snap, path.string());
  auto back = load_snapshot(path.string());
  REQUIRE(back == snap);
  REQUIRE(back.validators[0].stake.str() ==
          "1000000000000000000000000000000");
  std::filesystem::remove(path);

  std::mt19937_64 rng(61);
  for (int i = 0; i < 20; ++i) {
    auto rand_snap = oracles::random_snapshot(rng, 1 + rng() % 40);
    write_snapshot(rand_snap, path.string());
    REQUIRE(load_snapshot(path.string()) == rand_snap);
  }
  std::filesystem::remove(path);
}

TEST_CASE("writing an empty snapshot is rejected") {
  REQUIRE_THROWS_AS(write_snapshot(ValidatorSnapshot{}, "/tmp/nope.json"),
                    EmptySetError);
}

namespace {

// In-process Cosmos-SDK-style staking endpoint serving `total` validators in
// pages of `page_size`.
class MockStakingServer {
 public:
  MockStakingServer(std::size_t total, std::size_t page_size,
                    bool corrupt_tokens = false)
      : total_(total), page_size_(page_size), corrupt_(corrupt_tokens) {
    server_.Get("/cosmos/staking/v1beta1/validators",
                [this](const httplib::Request& req, httplib::Response& res) {
                  handle(req, res);
                });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }

  ~MockStakingServer() {
    server_.stop();
    thread_.join();
  }

  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }

 private:
  void handle(const httplib::Request& req, httplib::Response& res) {
    std::size_t offset = 0;
    if (req.has_param("pagination.key"))
      offset = std::stoul(req.get_param_value("pagination.key"));
    nlohmann::json page;
    page["validators"] = nlohmann::json::array();
    std::size_t end = std::min(offset + page_size_, total_);
    for (std::size_t i = offset; i < end; ++i) {
      nlohmann::json v;
      char addr[32];
      std::snprintf(addr, sizeof addr, "cosmosvaloper%04zu", i);
      v["operator_address"] = addr;
      v["tokens"] = corrupt_ ? "12abc" : std::to_string(1000000 + i * 17);
      v["status"] = "BOND_STATUS_BONDED";
      v["description"] = {{"moniker", "node-" + std::to_string(i)}};
      page["validators"].push_back(std::move(v));
    }
    page["pagination"]["next_key"] =
        end < total_ ? std::to_string(end) : std::string{};
    res.set_content(page.dump(), "application/json");
  }

  std::size_t total_;
  std::size_t page_size_;
  bool corrupt_;
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
};

}  // namespace

TEST_CASE("fetch aggregates paginated bonded validators") {
  MockStakingServer server(100, 50);
  ChainAdapter adapter;
  adapter.endpoint_url = server.url();
  adapter.pagination_limit = 50;
  auto snap = fetch_validators(adapter);
  REQUIRE(snap.validators.size() == 100);
  REQUIRE(snap.chain == "cosmos");
  for (const auto& v : snap.validators) REQUIRE(v.stake > 0);
}

TEST_CASE("fetch result is independent of page size") {
  MockStakingServer a(73, 10);
  MockStakingServer b(73, 73);
  ChainAdapter aa, ab;
  aa.endpoint_url = a.url();
  ab.endpoint_url = b.url();
  auto sa = fetch_validators(aa);
  auto sb = fetch_validators(ab);
  REQUIRE(sa.validators == sb.validators);
}

TEST_CASE("fetch surfaces malformed token strings") {
  MockStakingServer server(5, 5, /*corrupt_tokens=*/true);
  ChainAdapter adapter;
  adapter.endpoint_url = server.url();
  REQUIRE_THROWS_AS(fetch_validators(adapter), MalformedResponseError);
}

TEST_CASE("fetch fails with a typed error when nothing listens") {
  ChainAdapter adapter;
  adapter.endpoint_url = "http://127.0.0.1:1";  // nothing there
  adapter.max_attempts = 2;
  adapter.backoff_base = std::chrono::milliseconds{10};
  REQUIRE_THROWS_AS(fetch_validators(adapter), NetworkError);
}
