#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "causal_econf/epredict.hpp"
#include "causal_econf/error.hpp"
#include "causal_econf/io.hpp"
#include "causal_econf/report.hpp"

namespace causal_econf {

/// Process exit codes. Stable API.
enum ExitCode : int {
  kExitOk = 0,
  kExitCheckFailed = 1,
  kExitConfig = 2,
  kExitIo = 3,
  kExitValidation = 4,
  kExitBudget = 5,
};

int exit_code_for(ErrorCode code) noexcept;

inline constexpr const char* kSeedEnvVar = "CAUSAL_ECONF_SEED";

struct RunConfig {
  std::filesystem::path model_path;
  std::optional<std::filesystem::path> dataset_path;
  std::string x = "0";  // label or index
  /// Each entry: "uniform" | "point:<label>" | comma-separated probabilities.
  std::vector<std::string> q = {"uniform"};
  std::size_t n = 50;
  double c = 1.0;
  std::uint64_t trials = 100'000;
  std::optional<std::uint64_t> seed;
  std::vector<double> alphas = {10.0};
  std::vector<double> markov_levels = {2.0, 10.0, 100.0};
  std::string strategy = "copy-z";
  bool strict_past = false;
  std::vector<double> c_values = {0.25, 0.5, 1.0};
  std::optional<std::string> y;  // conditional check; all labels when empty
  std::optional<std::string> z;
  std::string mode = "auto";  // conditional check: auto | exact | mc
  std::uint64_t budget = 10'000'000;
  unsigned threads = 0;
  double sigmas = 4.0;
  std::filesystem::path out_dir = ".";
  std::vector<std::string> formats = {"json", "csv"};
};

enum class CheckKind { Lemma1, Validity, Lemma2, Conditional, Slack, Sweep, Exact };

CheckKind parse_check_kind(std::string_view name);
std::string_view to_string(CheckKind kind) noexcept;

/// Seed from the config, else from CAUSAL_ECONF_SEED, else 0.
std::uint64_t resolve_seed(const RunConfig& cfg);

AlternativeQ parse_q(std::string_view spec, const Labels& labels);

/// Builds region.json content (ratios, estimated and oracle regions per alpha).
nlohmann::json build_region(const RunConfig& cfg);
/// Runs build_region and writes `<out_dir>/region.json`.
std::filesystem::path cmd_region(const RunConfig& cfg);

Report build_check(const RunConfig& cfg, CheckKind kind);
/// Runs build_check and writes report.json / report.csv per cfg.formats.
/// Returns the exit code: 0 iff every pass flag holds (sweep always 0).
int cmd_check(const RunConfig& cfg, CheckKind kind);

std::filesystem::path cmd_plot(const std::filesystem::path& report, std::string_view kind,
                               const std::filesystem::path& out);

}  // namespace causal_econf
