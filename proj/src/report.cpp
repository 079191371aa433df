#include "causal_econf/report.hpp"

#include <fmt/format.h>

#include "causal_econf/error.hpp"
#include "causal_econf/io.hpp"

namespace causal_econf {

using nlohmann::json;

namespace {

json exact_value(const ExactValue& v) {
  return json{{"value", to_string(v.value)},
              {"value_double", v.value.get_d()},
              {"bound", to_string(v.bound)},
              {"bound_double", v.bound.get_d()},
              {"holds", v.holds()}};
}

json error_point(const ErrorPoint& p) {
  return json{{"alpha", p.alpha},       {"rate", p.rate}, {"stderr", p.std_error},
              {"envelope", p.envelope}, {"pass", p.pass}};
}

std::string number(double v) { return fmt::format("{:.17g}", v); }

}  // namespace

json to_json(const MCReport& r) {
  json out{{"quantity", r.quantity}, {"estimate", r.estimate}, {"stderr", r.std_error},
           {"trials", r.trials},     {"seed", r.seed},         {"c", r.c},
           {"N", r.n},               {"bound", r.bound},       {"pass", r.pass}};
  out["y"] = r.y ? json(*r.y) : json(nullptr);
  return out;
}

json to_json(const ValidityReport& r) {
  json curve = json::array(), markov = json::array();
  for (const auto& p : r.curve) curve.push_back(error_point(p));
  for (const auto& p : r.markov) markov.push_back(error_point(p));
  return json{{"mean_e", to_json(r.mean_e)},
              {"error_curve", curve},
              {"markov", markov},
              {"grid", {{"lo", r.grid.lo}, {"hi", r.grid.hi}, {"points", r.grid.points}}},
              {"grid_integral", r.grid_integral},
              {"truncated_expectation", r.truncated_expectation},
              {"relative_gap", r.relative_gap},
              {"grid_agrees", r.grid_agrees},
              {"e_upper_bound", r.e_upper_bound},
              {"tail_below", r.tail_below},
              {"tail_above_bound", r.tail_above_bound}};
}

json to_json(const SlackReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    rows.push_back(json{{"y", row.y},
                        {"lemma", to_json(row.lemma)},
                        {"conformal", to_json(row.conformal)},
                        {"closed_form_mismatches", row.closed_form_mismatches},
                        {"max_closed_form_rel_error", row.max_closed_form_rel_error},
                        {"coincide", row.coincide},
                        {"ordered", row.ordered}});
  }
  return json{{"x", r.x}, {"N", r.n}, {"z_size", r.z_size}, {"rows", rows}};
}

json to_json(const ExactReport& r) {
  json per_y = json::array();
  for (std::size_t y = 0; y < r.per_y.size(); ++y) {
    json v = exact_value(r.per_y[y]);
    v["y"] = y;
    per_y.push_back(std::move(v));
  }
  return json{{"x", r.x},
              {"N", r.n},
              {"c", to_string(r.c)},
              {"datasets", r.datasets},
              {"per_y", per_y}};
}

json to_json(const ExactConditionalReport& r) {
  return json{{"x", r.x},
              {"y", r.y},
              {"z", r.z},
              {"N", r.n},
              {"datasets", r.datasets},
              {"z_bound", exact_value(r.z_bound)},
              {"conditional_bound", exact_value(r.conditional_bound)}};
}

MCReport exact_row(const std::string& quantity, std::size_t y, const ExactValue& v,
                   std::size_t n, double c) {
  MCReport r;
  r.quantity = quantity;
  r.y = y;
  r.estimate = v.value.get_d();
  r.std_error = 0.0;
  r.trials = 0;
  r.seed = 0;
  r.c = c;
  r.n = n;
  r.bound = v.bound.get_d();
  r.pass = v.holds();
  return r;
}

std::string report_json(const Report& report) {
  json rows = json::array();
  for (const auto& r : report.rows) rows.push_back(to_json(r));
  const json doc{{"command", report.command},
                 {"config", report.config},
                 {"all_pass", report.all_pass},
                 {"rows", rows},
                 {"details", report.details}};
  return doc.dump(2) + "\n";
}

std::string report_csv(const Report& report) {
  std::string out = std::string(kCsvHeader) + "\n";
  for (const auto& r : report.rows) {
    out += fmt::format("{},{},{},{},{},{},{},{},{}\n", r.quantity,
                       r.y ? std::to_string(*r.y) : std::string(), number(r.estimate),
                       number(r.std_error), r.trials, r.seed, number(r.c), r.n,
                       r.pass ? "true" : "false");
  }
  return out;
}

void write_report(const std::filesystem::path& dir, const Report& report) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, fmt::format("cannot create '{}': {}", dir.string(), ec.message()));
  write_file(dir / "report.json", report_json(report));
  write_file(dir / "report.csv", report_csv(report));
}

}  // namespace causal_econf
