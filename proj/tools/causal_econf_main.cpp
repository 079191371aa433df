// causal_econf: batch front-end for interventional e-prediction regions and
// the verification checks behind them.
//
//   causal_econf region --model m.json --x 1 --q uniform --alpha 10 --out out/
//   causal_econf check validity --model m.json --x 1 --N 50 --out out/
//   causal_econf plot --report out/report.json --kind error-vs-alpha --out out/err.svg
//
// Every subcommand accepts --config FILE (JSON object or TOML key = value);
// flags given on the command line win over the file.

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "causal_econf/app.hpp"
#include "causal_econf/error.hpp"

namespace {

using causal_econf::RunConfig;

constexpr const char* kConfigHelp =
    "--config FILE  JSON object or TOML key = value file of option values for this "
    "subcommand; flags given on the command line win";

// Reads a flat JSON object as config items; anything else goes to the TOML reader.
// The config option lives on the root app, so unqualified keys are attached to
// the subcommand being run.
class JsonOrTomlConfig : public CLI::ConfigTOML {
 public:
  explicit JsonOrTomlConfig(const CLI::App& root) : root_(root) {}

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    auto items = read(input);
    const auto active = root_.get_subcommands();
    if (!active.empty()) {
      for (auto& item : items) {
        if (item.parents.empty()) item.parents.push_back(active.front()->get_name());
      }
    }
    return items;
  }

 private:
  std::vector<CLI::ConfigItem> read(std::istream& input) const {
    std::stringstream buffer;
    buffer << input.rdbuf();
    const std::string text = buffer.str();
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos || text[first] != '{') {
      std::istringstream again(text);
      return CLI::ConfigTOML::from_config(again);
    }
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw CLI::ConversionError(std::string("config file: ") + e.what());
    }
    std::vector<CLI::ConfigItem> items;
    for (const auto& [key, value] : doc.items()) {
      CLI::ConfigItem item;
      item.name = key;
      if (value.is_array()) {
        for (const auto& v : value) item.inputs.push_back(scalar(v));
      } else {
        item.inputs.push_back(scalar(value));
      }
      items.push_back(std::move(item));
    }
    return items;
  }

  static std::string scalar(const nlohmann::json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    return v.dump();
  }

  const CLI::App& root_;
};

void add_common(CLI::App& cmd, RunConfig& cfg) {
  cmd.fallthrough();
  cmd.footer(kConfigHelp);
  cmd.add_option("--model", cfg.model_path,
                 "model JSON: x_labels, y_labels, z_labels, probs (row-major x,y,z)")
      ->required();
  cmd.add_option("--x", cfg.x, "intervention value X := x (label or index)")
      ->capture_default_str();
  cmd.add_option("--N", cfg.n, "sample size of each dataset")->capture_default_str();
  cmd.add_option("--c", cfg.c,
                 "smoothing constant replacing each +1 in F_y = sum_z (n_z+c)/(N+c) * "
                 "(n_xyz+c)/(n_xz+c)")
      ->capture_default_str();
  cmd.add_option("--seed", cfg.seed,
                 "64-bit seed; falls back to $CAUSAL_ECONF_SEED, then 0. Trial t uses stream t");
  cmd.add_option("--out", cfg.out_dir, "output directory")->capture_default_str();
}

void add_mc(CLI::App& cmd, RunConfig& cfg) {
  cmd.add_option("--trials", cfg.trials, "Monte Carlo trials (>= 1000)")->capture_default_str();
  cmd.add_option("--threads", cfg.threads, "worker threads, 0 = all cores; output is identical")
      ->capture_default_str();
  cmd.add_option("--sigmas", cfg.sigmas,
                 "pass iff estimate <= bound + sigmas * stderr")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conformal e-prediction of interventional outcomes under observed confounding"};
  app.config_formatter(std::make_shared<JsonOrTomlConfig>(app));
  app.set_config("--config", "", "JSON or TOML file of option values; flags override it");
  app.require_subcommand(1);

  RunConfig region_cfg;
  auto* region = app.add_subcommand("region", "write region.json: e-values Q(y)/F_y and the "
                                              "regions {y : Q(y)/F_y < alpha}, plus oracle regions "
                                              "with the true p_y");
  add_common(*region, region_cfg);
  region->add_option("--dataset", region_cfg.dataset_path,
                     "CSV with header x,y,z (indices or labels); sampled IID when absent");
  region->add_option("--q", region_cfg.q,
                     "alternative Q: uniform | point:<label> | comma-separated probabilities")
      ->capture_default_str();
  region->add_option("--alpha", region_cfg.alphas,
                     "significance levels; y is kept iff Q(y)/F_y < alpha")
      ->capture_default_str();

  RunConfig check_cfg;
  std::string which;
  auto* check = app.add_subcommand(
      "check", "verify a finite-sample bound and write report.json + report.csv");
  check->add_option("which", which,
                    "lemma1: E[p_y/F_y] <= 1 on IID data | validity: E[Q(Y)/F_Y] <= 1, "
                    "error-rate integral and 1/alpha envelope | lemma2: E[p_y/F_y] <= 1 "
                    "under a Y-oblivious X strategy | conditional: the two conformal factor "
                    "bounds | slack: P(X=x)=1 comparison with simple conformal | sweep: "
                    "c-sweep (exploratory) | exact: rational enumeration of E[p_y/F_y]")
      ->required()
      ->check(CLI::IsMember({"lemma1", "validity", "lemma2", "conditional", "slack", "sweep",
                             "exact"}));
  add_common(*check, check_cfg);
  add_mc(*check, check_cfg);
  check->add_option("--q", check_cfg.q, "alternatives Q for validity (repeatable)")
      ->capture_default_str();
  check->add_option("--markov-levels", check_cfg.markov_levels,
                    "alpha levels where the error rate must stay below 1/alpha")
      ->capture_default_str();
  check->add_option("--strategy", check_cfg.strategy,
                    "X strategy for lemma2: constant:<k> | uniform | copy-z | majority-z; sees "
                    "past (X,Z) pairs and the current Z, never Y")
      ->capture_default_str();
  check->add_flag("--strict-past", check_cfg.strict_past,
                  "hide the current Z from the strategy");
  check->add_option("--c-values", check_cfg.c_values, "smoothing constants for sweep")
      ->capture_default_str();
  check->add_option("--y", check_cfg.y, "label for conditional (all labels when absent)");
  check->add_option("--z", check_cfg.z, "adjustment value for conditional (all when absent)");
  check->add_option("--mode", check_cfg.mode,
                    "conditional: auto (exact when N <= 3 and the model is rational) | exact | mc")
      ->capture_default_str()
      ->check(CLI::IsMember({"auto", "exact", "mc"}));
  check->add_option("--budget", check_cfg.budget,
                    "largest number of enumerated datasets (cells^N) for exact checks")
      ->capture_default_str();
  check->add_option("--format", check_cfg.formats, "json and/or csv")->capture_default_str();

  std::string report_path, plot_kind, plot_out;
  auto* plot = app.add_subcommand("plot", "render a report as SVG");
  plot->fallthrough();
  plot->footer(kConfigHelp);
  plot->add_option("--report", report_path, "report.json or region.json")->required();
  plot->add_option("--kind", plot_kind,
                   "error-vs-alpha: error rate vs alpha against the 1/alpha Markov envelope | "
                   "region-size: region size vs alpha, estimated vs oracle | sweep: estimates "
                   "per c")
      ->required()
      ->check(CLI::IsMember({"error-vs-alpha", "region-size", "sweep"}));
  plot->add_option("--out", plot_out, "output SVG path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : causal_econf::kExitConfig;
  }

  try {
    if (*region) {
      std::cout << causal_econf::cmd_region(region_cfg).string() << "\n";
      return causal_econf::kExitOk;
    }
    if (*check) {
      const int code = causal_econf::cmd_check(check_cfg, causal_econf::parse_check_kind(which));
      std::cout << (check_cfg.out_dir / "report.json").string() << "\n";
      if (code != causal_econf::kExitOk) std::cerr << "check " << which << ": some bound failed\n";
      return code;
    }
    if (*plot) {
      std::cout << causal_econf::cmd_plot(report_path, plot_kind, plot_out).string() << "\n";
      return causal_econf::kExitOk;
    }
  } catch (const causal_econf::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return causal_econf::exit_code_for(e.code());
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return causal_econf::kExitIo;
  }
  return causal_econf::kExitConfig;
}
