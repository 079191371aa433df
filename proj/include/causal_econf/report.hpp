#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "causal_econf/exact.hpp"
#include "causal_econf/experiments.hpp"

namespace causal_econf {

/// Everything a `check` run writes. `rows` feed the flat CSV; `details` holds
/// the structured extras (curves, exact rationals, slack diagnostics).
struct Report {
  std::string command;
  nlohmann::json config = nlohmann::json::object();
  std::vector<MCReport> rows;
  nlohmann::json details = nlohmann::json::object();
  bool all_pass = true;
};

inline constexpr const char* kCsvHeader = "quantity,y,estimate,stderr,trials,seed,c,N,pass";

nlohmann::json to_json(const MCReport& r);
nlohmann::json to_json(const ValidityReport& r);
nlohmann::json to_json(const SlackReport& r);
nlohmann::json to_json(const ExactReport& r);
nlohmann::json to_json(const ExactConditionalReport& r);

/// Flat row for an exact result: trials=0, stderr=0, estimate is the double rendering.
MCReport exact_row(const std::string& quantity, std::size_t y, const ExactValue& v,
                   std::size_t n, double c);

std::string report_json(const Report& report);
std::string report_csv(const Report& report);

/// Writes report.json and report.csv into `dir` (created if missing).
void write_report(const std::filesystem::path& dir, const Report& report);

}  // namespace causal_econf
