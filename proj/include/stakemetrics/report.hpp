#pragma once

#include <cstdio>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "stakemetrics/metrics.hpp"
#include "stakemetrics/model.hpp"

namespace stakemetrics {

struct ChainComparison {
  std::string chain;
  std::size_t m = 0;
  MetricsReport linear;
  MetricsReport srsw;
  double gini_pct_decrease = 0.0;
  double nl_pct_increase = 0.0;
  double ns_pct_increase = 0.0;
};

struct ComparisonReport {
  std::vector<ChainComparison> rows;
  double mean_gini_pct_decrease = 0.0;
  double mean_nl_pct_increase = 0.0;
  double mean_ns_pct_increase = 0.0;
};

inline ChainComparison compare_schemes(const ValidatorSnapshot& snapshot,
                                       const std::vector<int>& deltas = {0, 50}) {
  ChainComparison c;
  c.chain = snapshot.chain;
  c.m = snapshot.validators.size();
  c.linear = full_report(apply_weights(snapshot, WeightScheme::Linear), deltas);
  c.srsw = full_report(apply_weights(snapshot, WeightScheme::Srsw), deltas);
  c.gini_pct_decrease =
      c.linear.gini > 0.0
          ? (c.linear.gini - c.srsw.gini) / c.linear.gini * 100.0
          : 0.0;
  c.nl_pct_increase =
      (static_cast<double>(c.srsw.nakamoto_liveness) -
       static_cast<double>(c.linear.nakamoto_liveness)) /
      static_cast<double>(c.linear.nakamoto_liveness) * 100.0;
  c.ns_pct_increase =
      (static_cast<double>(c.srsw.nakamoto_safety) -
       static_cast<double>(c.linear.nakamoto_safety)) /
      static_cast<double>(c.linear.nakamoto_safety) * 100.0;
  return c;
}

inline ComparisonReport build_comparison(
    const std::vector<ValidatorSnapshot>& snapshots,
    const std::vector<int>& deltas = {0, 50}) {
  ComparisonReport report;
  for (const auto& s : snapshots) report.rows.push_back(compare_schemes(s, deltas));
  if (!report.rows.empty()) {
    for (const auto& r : report.rows) {
      report.mean_gini_pct_decrease += r.gini_pct_decrease;
      report.mean_nl_pct_increase += r.nl_pct_increase;
      report.mean_ns_pct_increase += r.ns_pct_increase;
    }
    const auto n = static_cast<double>(report.rows.size());
    report.mean_gini_pct_decrease /= n;
    report.mean_nl_pct_increase /= n;
    report.mean_ns_pct_increase /= n;
  }
  return report;
}

namespace fmt {

inline std::string fixed2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

// "rho (N)" convention, e.g. "3.89 (7)"
inline std::string rho_n(double rho, std::size_t n) {
  return fixed2(rho) + " (" + std::to_string(n) + ")";
}

// scientific with 6 significand digits, e.g. "2.470500e+02"
inline std::string sci6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

}  // namespace fmt

inline nlohmann::json report_to_json(const MetricsReport& r) {
  nlohmann::json j;
  j["m"] = r.m;
  j["gini"] = r.gini;
  j["nakamoto_liveness"] = r.nakamoto_liveness;
  j["rho_liveness"] = r.rho_liveness;
  j["nakamoto_safety"] = r.nakamoto_safety;
  j["rho_safety"] = r.rho_safety;
  j["epsilon"] = nlohmann::json::object();
  for (const auto& [delta, eps] : r.epsilon_by_delta)
    j["epsilon"][std::to_string(delta)] = eps;
  return j;
}

inline nlohmann::json comparison_to_json(const ComparisonReport& report) {
  nlohmann::json j;
  j["chains"] = nlohmann::json::array();
  for (const auto& row : report.rows) {
    nlohmann::json r;
    r["chain"] = row.chain;
    r["m"] = row.m;
    r["linear"] = report_to_json(row.linear);
    r["srsw"] = report_to_json(row.srsw);
    r["gini_pct_decrease"] = row.gini_pct_decrease;
    r["nl_pct_increase"] = row.nl_pct_increase;
    r["ns_pct_increase"] = row.ns_pct_increase;
    j["chains"].push_back(std::move(r));
  }
  j["mean"] = {{"gini_pct_decrease", report.mean_gini_pct_decrease},
               {"nl_pct_increase", report.mean_nl_pct_increase},
               {"ns_pct_increase", report.mean_ns_pct_increase}};
  return j;
}

inline void print_report_table(const MetricsReport& r, const std::string& chain,
                               std::ostream& os) {
  os << std::left << std::setw(12) << "chain" << std::setw(6) << "m"
     << std::setw(7) << "G" << std::setw(14) << "rho_NL (NL)" << std::setw(14)
     << "rho_NS (NS)";
  for (const auto& [delta, eps] : r.epsilon_by_delta)
    os << std::setw(16) << ("eps(d=" + std::to_string(delta) + ")");
  os << '\n';
  os << std::left << std::setw(12) << chain << std::setw(6) << r.m
     << std::setw(7) << fmt::fixed2(r.gini) << std::setw(14)
     << fmt::rho_n(r.rho_liveness, r.nakamoto_liveness) << std::setw(14)
     << fmt::rho_n(r.rho_safety, r.nakamoto_safety);
  for (const auto& [delta, eps] : r.epsilon_by_delta)
    os << std::setw(16) << fmt::sci6(eps);
  os << '\n';
}

inline void print_comparison_table(const ComparisonReport& report,
                                   std::ostream& os) {
  os << std::left << std::setw(12) << "chain" << std::setw(6) << "m"
     << std::setw(8) << "G" << std::setw(8) << "G*" << std::setw(10)
     << "G %dec" << std::setw(10) << "NL" << std::setw(10) << "NL*"
     << std::setw(10) << "NL %inc" << std::setw(10) << "NS" << std::setw(10)
     << "NS*" << std::setw(10) << "NS %inc" << '\n';
  for (const auto& r : report.rows) {
    os << std::left << std::setw(12) << r.chain << std::setw(6) << r.m
       << std::setw(8) << fmt::fixed2(r.linear.gini) << std::setw(8)
       << fmt::fixed2(r.srsw.gini) << std::setw(10)
       << fmt::fixed2(r.gini_pct_decrease) << std::setw(10)
       << r.linear.nakamoto_liveness << std::setw(10)
       << r.srsw.nakamoto_liveness << std::setw(10)
       << fmt::fixed2(r.nl_pct_increase) << std::setw(10)
       << r.linear.nakamoto_safety << std::setw(10) << r.srsw.nakamoto_safety
       << std::setw(10) << fmt::fixed2(r.ns_pct_increase) << '\n';
  }
  os << std::left << std::setw(12) << "mean" << std::setw(6) << "" << std::setw(8)
     << "" << std::setw(8) << "" << std::setw(10)
     << fmt::fixed2(report.mean_gini_pct_decrease) << std::setw(10) << ""
     << std::setw(10) << "" << std::setw(10)
     << fmt::fixed2(report.mean_nl_pct_increase) << std::setw(10) << ""
     << std::setw(10) << "" << std::setw(10)
     << fmt::fixed2(report.mean_ns_pct_increase) << '\n';
}

inline void print_comparison_csv(const ComparisonReport& report,
                                 std::ostream& os) {
  os << "chain,m,gini_linear,gini_srsw,gini_pct_decrease,nl_linear,nl_srsw,"
        "nl_pct_increase,ns_linear,ns_srsw,ns_pct_increase\n";
  for (const auto& r : report.rows) {
    os << r.chain << ',' << r.m << ',' << r.linear.gini << ',' << r.srsw.gini
       << ',' << r.gini_pct_decrease << ',' << r.linear.nakamoto_liveness
       << ',' << r.srsw.nakamoto_liveness << ',' << r.nl_pct_increase << ','
       << r.linear.nakamoto_safety << ',' << r.srsw.nakamoto_safety << ','
       << r.ns_pct_increase << '\n';
  }
  os << "mean,,,," << report.mean_gini_pct_decrease << ",,,"
     << report.mean_nl_pct_increase << ",,," << report.mean_ns_pct_increase
     << '\n';
}

}  // namespace stakemetrics
