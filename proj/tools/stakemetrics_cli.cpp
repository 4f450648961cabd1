// Command-line front end: analyze snapshots, compare weighting schemes,
// run reward/proposer simulations, fetch live validator sets, and check
// stake-split rationality.

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "stakemetrics/ingest.hpp"
#include "stakemetrics/metrics.hpp"
#include "stakemetrics/model.hpp"
#include "stakemetrics/report.hpp"
#include "stakemetrics/simulate.hpp"
#include "stakemetrics/srsw.hpp"

namespace sm = stakemetrics;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDataError = 1;
constexpr int kExitNetworkError = 2;

sm::WeightScheme parse_scheme(const std::string& name) {
  if (name == "linear") return sm::WeightScheme::Linear;
  if (name == "srsw") return sm::WeightScheme::Srsw;
  throw sm::DomainError{"unknown scheme: " + name};
}

std::ostream& open_out(std::ofstream& file, const std::string& path) {
  if (path.empty()) return std::cout;
  file.open(path, std::ios::binary);
  if (!file) throw sm::IOError{"cannot open " + path + " for writing"};
  return file;
}

struct AnalyzeArgs {
  std::string snapshot_path;
  std::string scheme = "linear";
  std::vector<int> deltas = {0, 50};
  std::string format = "table";
  std::string out;
};

int run_analyze(const AnalyzeArgs& args) {
  auto snapshot = sm::load_snapshot(args.snapshot_path);
  auto ws = sm::apply_weights(snapshot, parse_scheme(args.scheme));
  auto report = sm::full_report(ws, args.deltas);
  std::ofstream file;
  std::ostream& os = open_out(file, args.out);
  if (args.format == "json") {
    auto j = sm::report_to_json(report);
    j["chain"] = snapshot.chain;
    j["scheme"] = sm::to_string(ws.scheme);
    os << j.dump(1) << '\n';
  } else {
    sm::print_report_table(report, snapshot.chain, os);
  }
  return kExitOk;
}

struct CompareArgs {
  std::vector<std::string> snapshot_paths;
  std::vector<int> deltas = {0, 50};
  std::string format = "table";
  std::string out;
  bool allow_partial = false;
};

int run_compare(const CompareArgs& args) {
  std::vector<sm::ValidatorSnapshot> snapshots;
  bool had_errors = false;
  for (const auto& path : args.snapshot_paths) {
    try {
      snapshots.push_back(sm::load_snapshot(path));
    } catch (const sm::DomainError& e) {
      std::cerr << "error: " << path << ": " << e.what() << '\n';
      had_errors = true;
      if (!args.allow_partial) return kExitDataError;
    }
  }
  if (snapshots.empty()) {
    std::cerr << "error: no readable snapshots\n";
    return kExitDataError;
  }
  auto report = sm::build_comparison(snapshots, args.deltas);
  std::ofstream file;
  std::ostream& os = open_out(file, args.out);
  if (args.format == "json")
    os << sm::comparison_to_json(report).dump(1) << '\n';
  else if (args.format == "csv")
    sm::print_comparison_csv(report, os);
  else
    sm::print_comparison_table(report, os);
  return had_errors ? kExitDataError : kExitOk;
}

struct SimRewardsArgs {
  std::string snapshot_path;
  std::string scheme = "linear";
  std::size_t epochs = 365;
  std::optional<double> alpha;
  std::optional<double> alpha_annual;
  std::size_t epochs_per_year = 365;
  std::size_t cap_m = 0;  // 0 = no cap
  std::string out;
};

int run_sim_rewards(const SimRewardsArgs& args) {
  auto snapshot = sm::load_snapshot(args.snapshot_path);
  sm::EconParams params;
  params.scheme = parse_scheme(args.scheme);
  params.cap_m = args.cap_m ? args.cap_m : snapshot.validators.size();
  std::optional<double> annual = args.alpha_annual;
  if (args.alpha) {
    params.alpha = *args.alpha;
    annual.reset();
  } else if (!annual) {
    annual = 4.5;  // typical annual inflation, percent
  }
  auto traj = sm::simulate_rewards(snapshot, params, args.epochs, annual,
                                   args.epochs_per_year);
  std::ofstream file;
  std::ostream& os = open_out(file, args.out);
  sm::write_trajectory_csv(traj, os);
  const auto& first = traj.stakes_by_validator.front();
  std::cerr << "simulated " << args.epochs << " epochs, scheme "
            << args.scheme << "; top validator stake " << first.front()
            << " -> " << first.back() << '\n';
  return kExitOk;
}

struct SimProposersArgs {
  std::string snapshot_path;
  std::string scheme = "linear";
  std::size_t draws = 1000000;
  std::optional<std::uint64_t> seed;
  std::string out;
  bool compare = false;
};

int run_sim_proposers(const SimProposersArgs& args) {
  auto snapshot = sm::load_snapshot(args.snapshot_path);
  std::uint64_t seed =
      args.seed ? *args.seed
                : static_cast<std::uint64_t>(std::random_device{}());
  if (!args.seed) std::cerr << "auto-generated seed: " << seed << '\n';
  std::ofstream file;
  std::ostream& os = open_out(file, args.out);
  if (args.compare) {
    auto cmp = sm::compare_proposer_concentration(snapshot, args.draws, seed);
    std::cerr << "rng mt19937_64 seed " << seed
              << "; expected-share gini linear=" << cmp.linear_share_gini
              << " srsw=" << cmp.srsw_share_gini << '\n';
    sm::write_histogram_csv(cmp.srsw, os);
    return kExitOk;
  }
  auto ws = sm::apply_weights(snapshot, parse_scheme(args.scheme));
  auto hist = sm::proposer_distribution(ws, args.draws, seed);
  std::cerr << "rng " << hist.rng_name << " seed " << seed << ", "
            << args.draws << " draws\n";
  sm::write_histogram_csv(hist, os);
  return kExitOk;
}

struct FetchArgs {
  std::string endpoint;
  std::string path = "/cosmos/staking/v1beta1/validators";
  std::string chain = "cosmos";
  std::size_t page_limit = 100;
  std::string out = "snapshot.json";
};

int run_fetch(const FetchArgs& args) {
  sm::ChainAdapter adapter;
  adapter.name = args.chain;
  adapter.endpoint_url = args.endpoint;
  adapter.path = args.path;
  adapter.pagination_limit = args.page_limit;
  auto snapshot = sm::fetch_validators(adapter);
  sm::write_snapshot(snapshot, args.out);
  std::cerr << "fetched " << snapshot.validators.size() << " validators -> "
            << args.out << '\n';
  return kExitOk;
}

struct SybilArgs {
  std::string stake;
  std::string threshold = "0";
  double alpha = 1.0;
  double cost = 0.0;
  std::string scheme = "srsw";
};

int run_sybil(const SybilArgs& args) {
  sm::EconParams params;
  params.alpha = args.alpha;
  params.sybil_cost = args.cost;
  params.scheme = parse_scheme(args.scheme);
  sm::Stake stake{args.stake};
  sm::Stake threshold{args.threshold};
  auto verdict = sm::sybil_split_analysis(stake, params, threshold);
  std::cout << std::fixed << std::setprecision(3);
  if (verdict.rational_to_split) {
    std::cout << "split rational: best split (" << verdict.best_split_a << ", "
              << verdict.best_split_b << ") nets " << verdict.best_split_reward
              << " vs single " << verdict.single_reward
              << " -- deterrence relies on a high Sybil cost C\n";
  } else {
    std::cout << "do not split (" << verdict.single_reward
              << " vs best split " << verdict.best_split_reward << ")\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decentralization metrics for weighted-consensus validator sets"};
  app.require_subcommand(1);

  AnalyzeArgs analyze_args;
  auto* analyze = app.add_subcommand("analyze", "Metrics for one snapshot");
  analyze->add_option("snapshot", analyze_args.snapshot_path)->required();
  analyze->add_option("--scheme", analyze_args.scheme)
      ->check(CLI::IsMember({"linear", "srsw"}));
  analyze->add_option("--delta", analyze_args.deltas)->delimiter(',');
  analyze->add_option("--format", analyze_args.format)
      ->check(CLI::IsMember({"table", "json"}));
  analyze->add_option("--out", analyze_args.out);

  CompareArgs compare_args;
  auto* compare =
      app.add_subcommand("compare", "Linear vs SRSW across snapshots");
  compare->add_option("snapshots", compare_args.snapshot_paths)->required();
  compare->add_option("--delta", compare_args.deltas)->delimiter(',');
  compare->add_option("--format", compare_args.format)
      ->check(CLI::IsMember({"table", "json", "csv"}));
  compare->add_option("--out", compare_args.out);
  compare->add_flag("--allow-partial", compare_args.allow_partial,
                    "Report over readable snapshots even if some fail");

  auto* simulate = app.add_subcommand("simulate", "Reward / proposer simulation");
  simulate->require_subcommand(1);

  SimRewardsArgs rewards_args;
  auto* rewards = simulate->add_subcommand("rewards", "Stake compounding");
  rewards->add_option("snapshot", rewards_args.snapshot_path)->required();
  rewards->add_option("--scheme", rewards_args.scheme)
      ->check(CLI::IsMember({"linear", "srsw"}));
  rewards->add_option("--epochs", rewards_args.epochs);
  double alpha_tmp = 0.0, alpha_annual_tmp = 0.0;
  auto* alpha_opt = rewards->add_option("--alpha", alpha_tmp,
                                        "Per-epoch inflation factor");
  auto* annual_opt = rewards->add_option("--alpha-annual", alpha_annual_tmp,
                                         "Annual inflation rate, percent");
  rewards->add_option("--epochs-per-year", rewards_args.epochs_per_year);
  rewards->add_option("--cap-m", rewards_args.cap_m);
  rewards->add_option("--out", rewards_args.out);

  SimProposersArgs proposers_args;
  auto* proposers =
      simulate->add_subcommand("proposers", "Weighted proposer sampling");
  proposers->add_option("snapshot", proposers_args.snapshot_path)->required();
  proposers->add_option("--scheme", proposers_args.scheme)
      ->check(CLI::IsMember({"linear", "srsw"}));
  proposers->add_option("--draws", proposers_args.draws);
  std::uint64_t seed_tmp = 0;
  auto* seed_opt = proposers->add_option("--seed", seed_tmp);
  proposers->add_option("--out", proposers_args.out);
  proposers->add_flag("--compare", proposers_args.compare,
                      "Run both schemes and report share concentration");

  FetchArgs fetch_args;
  auto* fetch = app.add_subcommand("fetch", "Fetch bonded validators via REST");
  fetch->add_option("--endpoint", fetch_args.endpoint)
      ->envname("STAKEMETRICS_ENDPOINT")
      ->required();
  fetch->add_option("--path", fetch_args.path);
  fetch->add_option("--chain", fetch_args.chain);
  fetch->add_option("--page-limit", fetch_args.page_limit);
  fetch->add_option("--out", fetch_args.out);

  SybilArgs sybil_args;
  auto* sybil = app.add_subcommand("sybil", "Two-way stake-split rationality");
  sybil->add_option("stake", sybil_args.stake)->required();
  sybil->add_option("threshold", sybil_args.threshold,
                    "Admission threshold stake s_M");
  sybil->add_option("--alpha", sybil_args.alpha);
  sybil->add_option("--sybil-cost", sybil_args.cost);
  sybil->add_option("--scheme", sybil_args.scheme)
      ->check(CLI::IsMember({"linear", "srsw"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (*analyze) return run_analyze(analyze_args);
    if (*compare) return run_compare(compare_args);
    if (*rewards) {
      if (*alpha_opt) rewards_args.alpha = alpha_tmp;
      if (*annual_opt) rewards_args.alpha_annual = alpha_annual_tmp;
      return run_sim_rewards(rewards_args);
    }
    if (*proposers) {
      if (*seed_opt) proposers_args.seed = seed_tmp;
      return run_sim_proposers(proposers_args);
    }
    if (*fetch) return run_fetch(fetch_args);
    if (*sybil) return run_sybil(sybil_args);
  } catch (const sm::NetworkError& e) {
    std::cerr << "network error: " << e.what() << '\n';
    return kExitNetworkError;
  } catch (const sm::DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDataError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDataError;
  }
  return kExitDataError;
}
