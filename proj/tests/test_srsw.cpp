#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "stakemetrics/srsw.hpp"

using namespace stakemetrics;

namespace {

WeightedSet weighted(std::vector<long> stakes,
                     WeightScheme scheme = WeightScheme::Linear) {
  ValidatorSnapshot s;
  s.chain = "test";
  s.captured_at = "2023-12-14T00:00:00Z";
  int i = 0;
  for (long st : stakes)
    s.validators.push_back({"v" + std::to_string(i++), Stake{st}, std::nullopt});
  return apply_weights(canonicalize(std::move(s)), scheme);
}

}  // namespace

TEST_CASE("quorum threshold is two thirds of total weight") {
  auto q = quorum_threshold(weighted({1, 1, 1}));
  REQUIRE(q.threshold == Catch::Approx(2.0));
  auto q2 = quorum_threshold(weighted({4, 3, 2, 1}));
  REQUIRE(q2.threshold == Catch::Approx(20.0 / 3.0));
  auto q3 = quorum_threshold(weighted({4, 3, 2, 1}, WeightScheme::Srsw));
  REQUIRE(q3.threshold == Catch::Approx(4.0975096).margin(1e-6));
}

TEST_CASE("meets_quorum") {
  auto uniform = weighted({5, 5, 5});
  REQUIRE(meets_quorum(uniform, {0, 1}));
  REQUIRE_FALSE(meets_quorum(uniform, {2}));

  auto lin = weighted({4, 3, 2, 1});
  REQUIRE(meets_quorum(lin, {0, 1}));       // 7 >= 20/3
  REQUIRE_FALSE(meets_quorum(lin, {0}));    // 4 < 20/3

  REQUIRE_THROWS_AS(meets_quorum(lin, {0, 0}), IndexError);
  REQUIRE_THROWS_AS(meets_quorum(lin, {9}), IndexError);
}

TEST_CASE("quorum membership is monotone under subset growth") {
  std::mt19937_64 rng(37);
  for (int i = 0; i < 100; ++i) {
    auto snap = oracles::random_snapshot(rng, 2 + rng() % 12, 6.0);
    for (auto scheme : {WeightScheme::Linear, WeightScheme::Srsw}) {
      auto ws = apply_weights(snap, scheme);
      std::vector<std::size_t> subset;
      std::vector<std::size_t> order(ws.size());
      for (std::size_t k = 0; k < ws.size(); ++k) order[k] = k;
      std::shuffle(order.begin(), order.end(), rng);
      bool met = false;
      for (std::size_t idx : order) {
        subset.push_back(idx);
        bool now = meets_quorum(ws, subset);
        if (met) REQUIRE(now);  // never flips back to false
        met = now;
      }
      REQUIRE(met);  // full set always forms a quorum
    }
  }
}

TEST_CASE("uniform weights reduce to the count rule") {
  std::mt19937_64 rng(41);
  for (std::size_t m = 1; m <= 15; ++m) {
    std::vector<long> stakes(m, 7);
    auto ws = weighted(stakes);
    auto needed = static_cast<std::size_t>(
        std::ceil(2.0 * static_cast<double>(m) / 3.0));
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<std::size_t> order(m);
      for (std::size_t k = 0; k < m; ++k) order[k] = k;
      std::shuffle(order.begin(), order.end(), rng);
      std::size_t take = 1 + rng() % m;
      std::vector<std::size_t> subset(order.begin(), order.begin() + take);
      REQUIRE(meets_quorum(ws, subset) == (take >= needed));
    }
  }
}

TEST_CASE("select_top_m") {
  auto snap = weighted({5, 4, 3, 2, 1}).snapshot;
  auto sel = select_top_m(snap, 3);
  REQUIRE(sel.selected.validators.size() == 3);
  REQUIRE(sel.selected.validators[0].stake == 5);
  REQUIRE(sel.threshold_stake == 3);

  auto all = select_top_m(snap, 99);
  REQUIRE(all.selected.validators.size() == 5);
  REQUIRE(all.threshold_stake == 1);

  // tie at the boundary resolves by address ascending
  ValidatorSnapshot tie;
  tie.chain = "t";
  tie.validators = {{"d", Stake{5}, {}},
                    {"b", Stake{3}, {}},
                    {"a", Stake{3}, {}},
                    {"c", Stake{1}, {}}};
  auto sel2 = select_top_m(canonicalize(tie), 2);
  REQUIRE(sel2.selected.validators[1].address == "a");
  REQUIRE(sel2.threshold_stake == 3);

  std::mt19937_64 rng(43);
  for (int i = 0; i < 50; ++i) {
    auto s = oracles::random_snapshot(rng, 1 + rng() % 20);
    std::size_t cap = 1 + rng() % 25;
    auto r = select_top_m(s, cap);
    REQUIRE(r.selected.validators.size() == std::min(cap, s.validators.size()));
    for (std::size_t k = r.selected.validators.size();
         k < s.validators.size(); ++k)
      REQUIRE(s.validators[k].stake <= r.threshold_stake);
  }
}

TEST_CASE("reward formula") {
  EconParams lin{0.05, 100, 0.0, WeightScheme::Linear};
  REQUIRE(reward(Stake{100}, lin, Stake{10}) == Catch::Approx(5.0));
  REQUIRE(reward(Stake{10}, lin, Stake{10}) == 0.0);  // boundary earns zero
  REQUIRE(reward(Stake{3}, lin, Stake{10}) == 0.0);

  EconParams sq{1.0, 100, 0.0, WeightScheme::Srsw};
  REQUIRE(reward(Stake{4}, sq, Stake{3}) == Catch::Approx(2.0));
  REQUIRE(reward(Stake{3}, sq, Stake{3}) == 0.0);
}

TEST_CASE("reward is non-decreasing in stake above the threshold") {
  for (auto scheme : {WeightScheme::Linear, WeightScheme::Srsw}) {
    EconParams p{0.1, 100, 0.0, scheme};
    double prev = 0.0;
    for (long s = 11; s < 500; ++s) {
      double r = reward(Stake{s}, p, Stake{10});
      REQUIRE(r >= prev);
      prev = r;
    }
  }
}

TEST_CASE("sybil split: worked example deters fragmentation") {
  EconParams sq{1.0, 100, 0.0, WeightScheme::Srsw};
  auto v = sybil_split_analysis(Stake{4}, sq, Stake{3});
  REQUIRE(v.single_reward == Catch::Approx(2.0));
  REQUIRE(v.best_split_reward == Catch::Approx(std::sqrt(3.0)));
  REQUIRE_FALSE(v.rational_to_split);
}

TEST_CASE("sybil split: linear scheme is reward-neutral at zero cost") {
  EconParams lin{1.0, 100, 0.0, WeightScheme::Linear};
  auto v = sybil_split_analysis(Stake{4}, lin, Stake{0});
  REQUIRE(v.best_split_reward == Catch::Approx(v.single_reward));
  REQUIRE_FALSE(v.rational_to_split);  // no strict gain
}

TEST_CASE("sybil split: srsw without threshold or cost rewards splitting") {
  EconParams sq{1.0, 100, 0.0, WeightScheme::Srsw};
  auto v = sybil_split_analysis(Stake{100}, sq, Stake{0});
  REQUIRE(v.rational_to_split);
  REQUIRE(v.best_split_a == 50);
  REQUIRE(v.best_split_b == 50);
  REQUIRE(v.best_split_reward == Catch::Approx(2.0 * std::sqrt(50.0)));
  REQUIRE(v.best_split_reward / v.single_reward ==
          Catch::Approx(std::sqrt(2.0)));
}

TEST_CASE("sybil split: large stakes use the candidate shortcut") {
  EconParams sq{1.0, 100, 0.0, WeightScheme::Srsw};
  Stake huge{"1000000000000000000000000"};  // 1e24
  auto v = sybil_split_analysis(huge, sq, Stake{0});
  REQUIRE(v.rational_to_split);
  REQUIRE(v.best_split_a + v.best_split_b == huge);
  REQUIRE(v.best_split_reward / v.single_reward ==
          Catch::Approx(std::sqrt(2.0)).epsilon(1e-9));
}
