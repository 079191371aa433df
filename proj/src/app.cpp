#include "causal_econf/app.hpp"

#include <charconv>
#include <cstdlib>

#include <fmt/format.h>

#include "causal_econf/estimator.hpp"
#include "causal_econf/exact.hpp"
#include "causal_econf/experiments.hpp"
#include "causal_econf/plot.hpp"
#include "causal_econf/sampling.hpp"

namespace causal_econf {

using nlohmann::json;

namespace {

double parse_double(std::string_view text) {
  const std::string s(text);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw Error(ErrorCode::Config, fmt::format("'{}' is not a number", text));
  }
  return v;
}

McConfig mc_config(const RunConfig& cfg) {
  return McConfig{cfg.trials, resolve_seed(cfg), cfg.threads, cfg.sigmas};
}

json config_json(const RunConfig& cfg, CheckKind kind) {
  json out{{"check", std::string(to_string(kind))},
           {"model", cfg.model_path.generic_string()},
           {"x", cfg.x},
           {"N", cfg.n},
           {"c", cfg.c},
           {"trials", cfg.trials},
           {"seed", resolve_seed(cfg)},
           {"sigmas", cfg.sigmas}};
  switch (kind) {
    case CheckKind::Validity:
      out["q"] = cfg.q;
      out["markov_levels"] = cfg.markov_levels;
      break;
    case CheckKind::Lemma2:
      out["strategy"] = cfg.strategy;
      out["strict_past"] = cfg.strict_past;
      break;
    case CheckKind::Sweep: out["c_values"] = cfg.c_values; break;
    case CheckKind::Conditional:
      out["mode"] = cfg.mode;
      out["y"] = cfg.y ? json(*cfg.y) : json(nullptr);
      out["z"] = cfg.z ? json(*cfg.z) : json(nullptr);
      break;
    case CheckKind::Exact: out["budget"] = cfg.budget; break;
    default: break;
  }
  return out;
}

const RationalModel& require_exact(const ModelFile& file) {
  if (!file.exact) {
    throw Error(ErrorCode::NotRational,
                "exact mode needs every 'probs' entry written as a rational string, e.g. \"3/40\"");
  }
  return *file.exact;
}

std::vector<std::size_t> label_range(const std::optional<std::string>& token,
                                     const std::vector<std::string>& labels, const char* axis) {
  if (token) return {resolve_label(labels, *token, axis)};
  std::vector<std::size_t> all(labels.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return all;
}

bool all_rows_pass(const std::vector<MCReport>& rows) {
  for (const auto& r : rows) {
    if (!r.pass) return false;
  }
  return true;
}

void check_lemma(Report& report, std::vector<MCReport> rows) {
  report.rows = std::move(rows);
  report.all_pass = all_rows_pass(report.rows);
}

void check_validity(Report& report, const RunConfig& cfg, const ModelFile& file, std::size_t x) {
  json runs = json::array();
  for (const auto& spec : cfg.q) {
    const AlternativeQ q = parse_q(spec, file.labels);
    const ValidityReport v = validity_integral(file.model, x, q, cfg.n, {cfg.c}, mc_config(cfg),
                                               AlphaGrid{}, cfg.markov_levels);
    MCReport mean = v.mean_e;
    mean.quantity = fmt::format("validity[q={}]", spec);
    report.rows.push_back(mean);
    report.all_pass = report.all_pass && mean.pass && v.grid_agrees;
    for (const auto& pt : v.markov) {
      MCReport r = mean;
      r.quantity = fmt::format("error_rate[q={};alpha={:g}]", spec, pt.alpha);
      r.estimate = pt.rate;
      r.std_error = pt.std_error;
      r.bound = pt.envelope;
      r.pass = pt.pass;
      report.rows.push_back(r);
      report.all_pass = report.all_pass && pt.pass;
    }
    json run = to_json(v);
    run["q"] = spec;
    runs.push_back(std::move(run));
  }
  report.details["validity"] = std::move(runs);
}

void check_conditional(Report& report, const RunConfig& cfg, const ModelFile& file,
                       std::size_t x) {
  const bool exact = cfg.mode == "exact" || (cfg.mode == "auto" && cfg.n <= 3 && file.exact);
  if (cfg.mode != "auto" && cfg.mode != "exact" && cfg.mode != "mc") {
    throw Error(ErrorCode::Config, fmt::format("unknown mode '{}'", cfg.mode));
  }
  json entries = json::array();
  for (const std::size_t y : label_range(cfg.y, file.labels.y, "y")) {
    for (const std::size_t z : label_range(cfg.z, file.labels.z, "z")) {
      if (exact) {
        const auto r = exact_conditional_bounds(require_exact(file), x, y, z, cfg.n, cfg.budget);
        report.rows.push_back(exact_row(fmt::format("exact_conditional_z[z={}]", z), y,
                                        r.z_bound, cfg.n, 1.0));
        report.rows.push_back(exact_row(fmt::format("exact_conditional_xz[z={}]", z), y,
                                        r.conditional_bound, cfg.n, 1.0));
        entries.push_back(to_json(r));
      } else {
        auto r = mc_conditional_bounds(file.model, x, y, z, cfg.n, mc_config(cfg));
        r.z_factor.quantity = fmt::format("conditional_z[z={}]", z);
        r.conditional.quantity = fmt::format("conditional_xz[z={}]", z);
        entries.push_back(json{{"y", y},
                               {"z", z},
                               {"z_factor", to_json(r.z_factor)},
                               {"conditional", to_json(r.conditional)}});
        report.rows.push_back(r.z_factor);
        report.rows.push_back(r.conditional);
      }
    }
  }
  report.details["mode"] = exact ? "exact" : "mc";
  report.details["conditional"] = std::move(entries);
  report.all_pass = all_rows_pass(report.rows);
}

void check_slack(Report& report, const RunConfig& cfg, const ModelFile& file, std::size_t x) {
  const SlackReport s = slack_experiment(file.model, x, cfg.n, mc_config(cfg));
  for (const auto& row : s.rows) {
    report.rows.push_back(row.lemma);
    report.rows.push_back(row.conformal);
    report.all_pass = report.all_pass && row.lemma.pass && row.conformal.pass &&
                      row.closed_form_mismatches == 0 && row.ordered &&
                      (s.z_size != 1 || row.coincide);
  }
  report.details["slack"] = to_json(s);
}

void check_sweep(Report& report, const RunConfig& cfg, const ModelFile& file, std::size_t x) {
  const auto rows = regularization_sweep(file.model, x, cfg.n, cfg.c_values, mc_config(cfg));
  json table = json::array();
  for (const auto& row : rows) {
    json per_y = json::array();
    bool violated = false;
    for (const auto& r : row.per_y) {
      report.rows.push_back(r);
      per_y.push_back(to_json(r));
      violated = violated || !r.pass;
      if (row.asserted) report.all_pass = report.all_pass && r.pass;
    }
    table.push_back(json{{"c", row.c},
                         {"asserted", row.asserted},
                         {"empirical_violation", violated},
                         {"per_y", per_y}});
  }
  report.details["sweep"] = std::move(table);
}

void check_exact(Report& report, const RunConfig& cfg, const ModelFile& file, std::size_t x) {
  const RationalModel& model = require_exact(file);
  const ExactReport r = exact_lemma1(model, x, cfg.n, Rational(cfg.c), cfg.budget);
  for (std::size_t y = 0; y < r.per_y.size(); ++y) {
    report.rows.push_back(exact_row("exact_lemma1", y, r.per_y[y], cfg.n, cfg.c));
  }
  report.details["exact"] = to_json(r);
  report.all_pass = all_rows_pass(report.rows);
}

}  // namespace

int exit_code_for(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::Config: return kExitConfig;
    case ErrorCode::Io: return kExitIo;
    case ErrorCode::BudgetExceeded: return kExitBudget;
    default: return kExitValidation;
  }
}

CheckKind parse_check_kind(std::string_view name) {
  if (name == "lemma1") return CheckKind::Lemma1;
  if (name == "validity") return CheckKind::Validity;
  if (name == "lemma2") return CheckKind::Lemma2;
  if (name == "conditional") return CheckKind::Conditional;
  if (name == "slack") return CheckKind::Slack;
  if (name == "sweep") return CheckKind::Sweep;
  if (name == "exact") return CheckKind::Exact;
  throw Error(ErrorCode::Config, fmt::format("unknown check '{}'", name));
}

std::string_view to_string(CheckKind kind) noexcept {
  switch (kind) {
    case CheckKind::Lemma1: return "lemma1";
    case CheckKind::Validity: return "validity";
    case CheckKind::Lemma2: return "lemma2";
    case CheckKind::Conditional: return "conditional";
    case CheckKind::Slack: return "slack";
    case CheckKind::Sweep: return "sweep";
    case CheckKind::Exact: return "exact";
  }
  return "unknown";
}

std::uint64_t resolve_seed(const RunConfig& cfg) {
  if (cfg.seed) return *cfg.seed;
  const char* env = std::getenv(kSeedEnvVar);
  if (env == nullptr || *env == '\0') return 0;
  const std::string_view text(env);
  std::uint64_t seed = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), seed);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::Config, fmt::format("{}='{}' is not an unsigned integer", kSeedEnvVar, text));
  }
  return seed;
}

AlternativeQ parse_q(std::string_view spec, const Labels& labels) {
  const std::size_t ys = labels.y.size();
  if (spec == "uniform") return AlternativeQ::uniform(ys);
  if (spec.starts_with("point:")) {
    return AlternativeQ::point_mass(ys, resolve_label(labels.y, spec.substr(6), "y"));
  }
  std::vector<double> q;
  std::size_t start = 0;
  while (start <= spec.size()) {
    const auto comma = spec.find(',', start);
    const auto end = comma == std::string_view::npos ? spec.size() : comma;
    q.push_back(parse_double(spec.substr(start, end - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (q.size() != ys) {
    throw Error(ErrorCode::Config,
                fmt::format("Q '{}' has {} entries, model has {} labels", spec, q.size(), ys));
  }
  return AlternativeQ(std::move(q));
}

json build_region(const RunConfig& cfg) {
  const ModelFile file = load_model(cfg.model_path);
  const std::size_t x = resolve_label(file.labels.x, cfg.x, "x");
  if (cfg.q.size() != 1) throw Error(ErrorCode::Config, "region takes exactly one Q");
  const AlternativeQ q = parse_q(cfg.q.front(), file.labels);
  if (cfg.alphas.empty()) throw Error(ErrorCode::Config, "region needs at least one alpha");

  Dataset data;
  std::string source;
  if (cfg.dataset_path) {
    data = load_dataset_csv(*cfg.dataset_path, file.labels);
    source = cfg.dataset_path->generic_string();
  } else {
    data = sample_iid(file.model, cfg.n, {resolve_seed(cfg), 0});
    source = "sampled";
  }
  const CountTable counts = fit_counts(data, file.model.shape());
  const std::vector<double> F = estimate_F_vector(counts, x, {cfg.c});
  const InterventionalDist p = interventional_py(file.model, x);

  auto region_json = [&](const ERegion& r) {
    json members = json::array(), indices = json::array();
    for (const std::size_t y : r.members) {
      members.push_back(file.labels.y[y]);
      indices.push_back(y);
    }
    return json{{"alpha", r.alpha},
                {"members", members},
                {"member_indices", indices},
                {"size", r.members.size()}};
  };

  json ratios = json::array(), oracle_ratios = json::array();
  for (std::size_t y = 0; y < F.size(); ++y) {
    ratios.push_back(evariable(q, F, y));
    oracle_ratios.push_back(evariable(q, p.p, y));
  }
  json regions = json::array(), oracle_regions = json::array(), size_ratio = json::array();
  for (const double alpha : cfg.alphas) {
    const ERegion est = region(q, F, alpha);
    const ERegion orc = oracle_region(q, p, alpha);
    regions.push_back(region_json(est));
    oracle_regions.push_back(region_json(orc));
    size_ratio.push_back(orc.members.empty()
                             ? json(nullptr)
                             : json(static_cast<double>(est.members.size()) /
                                    static_cast<double>(orc.members.size())));
  }
  return json{{"x", file.labels.x[x]},
              {"x_index", x},
              {"q_spec", cfg.q.front()},
              {"q", std::vector<double>(q.values().begin(), q.values().end())},
              {"c", cfg.c},
              {"N", data.size()},
              {"dataset", source},
              {"seed", resolve_seed(cfg)},
              {"y_labels", file.labels.y},
              {"F", F},
              {"ratios", ratios},
              {"regions", regions},
              {"oracle", {{"p", p.p}, {"ratios", oracle_ratios}, {"regions", oracle_regions}}},
              {"size_ratio", size_ratio}};
}

std::filesystem::path cmd_region(const RunConfig& cfg) {
  const json doc = build_region(cfg);
  std::error_code ec;
  std::filesystem::create_directories(cfg.out_dir, ec);
  if (ec) throw Error(ErrorCode::Io, fmt::format("cannot create '{}'", cfg.out_dir.string()));
  const auto path = cfg.out_dir / "region.json";
  write_file(path, doc.dump(2) + "\n");
  return path;
}

Report build_check(const RunConfig& cfg, CheckKind kind) {
  const ModelFile file = load_model(cfg.model_path);
  const std::size_t x = resolve_label(file.labels.x, cfg.x, "x");
  Report report;
  report.command = fmt::format("check {}", to_string(kind));
  report.config = config_json(cfg, kind);
  switch (kind) {
    case CheckKind::Lemma1:
      check_lemma(report, mc_lemma1(file.model, x, cfg.n, {cfg.c}, mc_config(cfg)));
      break;
    case CheckKind::Lemma2:
      check_lemma(report, adversarial_lemma2(file.model, make_strategy(cfg.strategy), x, cfg.n,
                                             {cfg.c}, mc_config(cfg), {cfg.strict_past}));
      break;
    case CheckKind::Validity: check_validity(report, cfg, file, x); break;
    case CheckKind::Conditional: check_conditional(report, cfg, file, x); break;
    case CheckKind::Slack: check_slack(report, cfg, file, x); break;
    case CheckKind::Sweep: check_sweep(report, cfg, file, x); break;
    case CheckKind::Exact: check_exact(report, cfg, file, x); break;
  }
  return report;
}

int cmd_check(const RunConfig& cfg, CheckKind kind) {
  const Report report = build_check(cfg, kind);
  std::error_code ec;
  std::filesystem::create_directories(cfg.out_dir, ec);
  if (ec) throw Error(ErrorCode::Io, fmt::format("cannot create '{}'", cfg.out_dir.string()));
  for (const auto& format : cfg.formats) {
    if (format == "json") {
      write_file(cfg.out_dir / "report.json", report_json(report));
    } else if (format == "csv") {
      write_file(cfg.out_dir / "report.csv", report_csv(report));
    } else {
      throw Error(ErrorCode::Config, fmt::format("unknown output format '{}'", format));
    }
  }
  if (kind == CheckKind::Sweep) return kExitOk;
  return report.all_pass ? kExitOk : kExitCheckFailed;
}

std::filesystem::path cmd_plot(const std::filesystem::path& report, std::string_view kind,
                               const std::filesystem::path& out) {
  const PlotKind plot_kind = parse_plot_kind(kind);
  const std::string text = read_file(report);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error&) {
    throw Error(ErrorCode::MissingField, fmt::format("'{}' is not a JSON report", report.string()));
  }
  const std::string svg = render_plot(doc, plot_kind);
  if (out.has_parent_path()) std::filesystem::create_directories(out.parent_path());
  write_file(out, svg);
  return out;
}

}  // namespace causal_econf
