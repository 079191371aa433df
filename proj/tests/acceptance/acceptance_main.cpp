// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "causal_econf/app.hpp"
#include "causal_econf/epredict.hpp"
#include "causal_econf/estimator.hpp"
#include "causal_econf/exact.hpp"
#include "causal_econf/experiments.hpp"
#include "causal_econf/io.hpp"
#include "causal_econf/model.hpp"

namespace {

using namespace causal_econf;
namespace fs = std::filesystem;

constexpr std::uint64_t kTrials = 100'000;
constexpr std::uint64_t kSeed = 20240611;
constexpr std::size_t kRandomModels = 20;

struct Outcome {
  bool pass = true;
  std::string detail;
  std::vector<std::string> failures;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (failures.size() < 5) failures.push_back(what);
    }
  }
};

std::string fixture(const std::string& name) { return std::string(FIXTURE_DIR) + "/" + name; }

RationalModel m1() { return *load_model(fixture("m1.json")).exact; }

RationalModel random_rational(Shape shape, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_int_distribution<long> weight(1, 20);
  std::vector<long> w(shape.cells());
  long total = 0;
  for (auto& v : w) total += (v = weight(gen));
  std::vector<Rational> table;
  for (const long v : w) table.push_back(ratio(v, static_cast<unsigned long>(total)));
  return RationalModel(shape, std::move(table));
}

std::vector<RationalModel> exact_models() {
  std::vector<RationalModel> models{m1()};
  for (std::size_t i = 0; i < kRandomModels; ++i) {
    models.push_back(random_rational({2, 2, 2}, 1000 + i));
  }
  return models;
}

McConfig mc(std::uint64_t seed = kSeed) { return McConfig{kTrials, seed, 0, kDefaultSigmas}; }

Outcome exact_lemma1_holds() {
  Outcome out;
  std::size_t checks = 0;
  Rational largest(0);
  const auto models = exact_models();
  for (std::size_t m = 0; m < models.size(); ++m) {
    for (std::size_t n = 0; n <= 3; ++n) {
      for (std::size_t x = 0; x < 2; ++x) {
        const auto r = exact_lemma1(models[m], x, n);
        for (std::size_t y = 0; y < r.per_y.size(); ++y) {
          ++checks;
          largest = std::max(largest, r.per_y[y].value);
          out.require(r.per_y[y].holds(), fmt::format("model {} N={} x={} y={}: {}", m, n, x, y,
                                                      to_string(r.per_y[y].value)));
        }
      }
    }
  }
  out.detail = fmt::format("{} exact expectations <= 1, largest {} ~ {:.6f}", checks,
                           to_string(largest), largest.get_d());
  return out;
}

Outcome mc_lemma1_m1() {
  Outcome out;
  const JointModel model = m1().to_joint();
  double worst = 0.0;
  for (const std::size_t n : {10u, 50u, 200u}) {
    for (std::size_t x = 0; x < 2; ++x) {
      for (const auto& r : mc_lemma1(model, x, n, {}, mc())) {
        worst = std::max(worst, r.estimate + 4.0 * r.std_error);
        out.require(r.pass, fmt::format("N={} x={} y={}: {} +/- {}", n, x, *r.y, r.estimate,
                                        r.std_error));
      }
    }
  }
  out.detail = fmt::format("N in {{10,50,200}}, x in {{0,1}}; max estimate + 4 stderr = {:.4f}",
                           worst);
  return out;
}

Outcome exact_vs_mc() {
  Outcome out;
  std::size_t checks = 0;
  double worst_z = 0.0;
  const auto models = exact_models();
  for (std::size_t m = 0; m < models.size(); ++m) {
    const JointModel joint = models[m].to_joint();
    for (std::size_t n = 0; n <= 3; ++n) {
      for (std::size_t x = 0; x < 2; ++x) {
        const auto exact = exact_lemma1(models[m], x, n);
        const auto reports = mc_lemma1(joint, x, n, {}, mc(kSeed + 7 * m + n));
        for (std::size_t y = 0; y < reports.size(); ++y) {
          ++checks;
          const double ref = exact.per_y[y].value.get_d();
          // N=0 values are constant; their stderr is roundoff, not sampling noise
          if (n > 0) {
            worst_z = std::max(worst_z, std::abs(reports[y].estimate - ref) / reports[y].std_error);
          }
          out.require(agrees_with(reports[y], ref),
                      fmt::format("model {} N={} x={} y={}: mc {} +/- {} vs exact {}", m, n, x,
                                  y, reports[y].estimate, reports[y].std_error, ref));
        }
      }
    }
  }
  out.detail = fmt::format("{} comparisons, largest |mc - exact| / stderr at N > 0 = {:.2f}",
                           checks, worst_z);
  return out;
}

std::vector<ValidityReport> validity_runs() {
  const JointModel model = m1().to_joint();
  std::vector<ValidityReport> runs;
  for (const auto& q :
       {AlternativeQ::uniform(2), AlternativeQ::point_mass(2, 0), AlternativeQ::point_mass(2, 1)}) {
    runs.push_back(validity_integral(model, 1, q, 50, {}, mc()));
  }
  return runs;
}

Outcome validity_integral_check(const std::vector<ValidityReport>& runs) {
  Outcome out;
  const char* names[] = {"uniform", "point:0", "point:1"};
  std::string parts;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const auto& v = runs[i];
    out.require(v.mean_e.pass, fmt::format("{}: mean e {} +/- {}", names[i], v.mean_e.estimate,
                                           v.mean_e.std_error));
    out.require(v.grid_agrees, fmt::format("{}: grid {} vs truncated mean {} (gap {:.4f})",
                                           names[i], v.grid_integral, v.truncated_expectation,
                                           v.relative_gap));
    parts += fmt::format("{}Q={}: E={:.4f} grid gap {:.2f}%", i ? "; " : "", names[i],
                         v.mean_e.estimate, 100.0 * v.relative_gap);
  }
  out.detail = parts;
  return out;
}

Outcome markov_envelope(const std::vector<ValidityReport>& runs) {
  Outcome out;
  std::size_t checks = 0;
  double worst = 0.0;
  for (const auto& v : runs) {
    for (const auto& pt : v.markov) {
      ++checks;
      worst = std::max(worst, pt.rate * pt.alpha);
      out.require(pt.pass, fmt::format("alpha={}: rate {} vs {}", pt.alpha, pt.rate, pt.envelope));
    }
  }
  out.detail = fmt::format("{} (Q, alpha) pairs at alpha in {{2,10,100}}; max alpha * rate = {:.4f}",
                           checks, worst);
  return out;
}

Outcome lemma2_strategies() {
  Outcome out;
  const JointModel model = m1().to_joint();
  double worst = 0.0;
  std::size_t checks = 0;
  for (const char* name : {"constant:0", "constant:1", "uniform", "copy-z", "majority-z"}) {
    for (const auto& r : adversarial_lemma2(model, make_strategy(name), 1, 50, {}, mc())) {
      ++checks;
      worst = std::max(worst, r.estimate);
      out.require(r.pass, fmt::format("{} y={}: {} +/- {}", name, *r.y, r.estimate, r.std_error));
    }
  }
  out.detail = fmt::format("{} strategy/label runs; largest estimate {:.4f}", checks, worst);
  return out;
}

Outcome slack_runs() {
  Outcome out;
  std::string parts;
  for (const std::size_t zs : {1u, 2u, 4u}) {
    const JointModel model = random_rational({2, 3, zs}, 500 + zs).to_joint();
    const SlackReport s = slack_experiment(model, 0, 50, mc());
    double gap = INFINITY;
    for (const auto& row : s.rows) {
      out.require(row.closed_form_mismatches == 0,
                  fmt::format("|Z|={} y={}: {} datasets off the closed form", zs, row.y,
                              row.closed_form_mismatches));
      out.require(row.max_closed_form_rel_error <= 1e-14,
                  fmt::format("|Z|={} y={}: double path off by {}", zs, row.y,
                              row.max_closed_form_rel_error));
      out.require(row.conformal.pass, fmt::format("|Z|={} y={}: conformal {} +/- {}", zs, row.y,
                                                  row.conformal.estimate,
                                                  row.conformal.std_error));
      if (zs == 1) {
        out.require(row.coincide, fmt::format("|Z|=1 y={}: quantities differ", row.y));
      } else {
        out.require(row.ordered, fmt::format("|Z|={} y={}: lemma {} > conformal {}", zs, row.y,
                                             row.lemma.estimate, row.conformal.estimate));
      }
      gap = std::min(gap, row.conformal.estimate - row.lemma.estimate);
    }
    parts += fmt::format("{}|Z|={}: min conformal - lemma = {:.4f}", zs == 1 ? "" : "; ", zs, gap);
  }
  out.detail = parts;
  return out;
}

Outcome conditional_bounds() {
  Outcome out;
  std::size_t exact_checks = 0, mc_checks = 0;
  const auto models = exact_models();
  for (std::size_t m = 0; m < models.size(); ++m) {
    for (std::size_t n = 0; n <= 3; ++n) {
      for (std::size_t x = 0; x < 2; ++x) {
        for (std::size_t y = 0; y < 2; ++y) {
          for (std::size_t z = 0; z < 2; ++z) {
            const auto r = exact_conditional_bounds(models[m], x, y, z, n);
            exact_checks += 2;
            out.require(r.z_bound.holds() && r.conditional_bound.holds(),
                        fmt::format("model {} N={} x={} y={} z={}", m, n, x, y, z));
          }
        }
      }
    }
  }
  const JointModel joint = models.front().to_joint();
  for (std::size_t x = 0; x < 2; ++x) {
    for (std::size_t y = 0; y < 2; ++y) {
      for (std::size_t z = 0; z < 2; ++z) {
        const auto r = mc_conditional_bounds(joint, x, y, z, 50, mc());
        mc_checks += 2;
        out.require(r.z_factor.pass && r.conditional.pass,
                    fmt::format("MC N=50 x={} y={} z={}: {} / {}", x, y, z, r.z_factor.estimate,
                                r.conditional.estimate));
      }
    }
  }
  out.detail = fmt::format("{} exact rational checks (N <= 3), {} MC checks at N=50",
                           exact_checks, mc_checks);
  return out;
}

Outcome structural_invariants() {
  Outcome out;
  std::mt19937_64 gen(kSeed);
  std::uniform_int_distribution<std::size_t> size(1, 5), rows(0, 60);
  for (int iter = 0; iter < 10000; ++iter) {
    const Shape shape{size(gen), size(gen), size(gen)};
    CountTable counts(shape);
    std::uniform_int_distribution<std::size_t> dx(0, shape.x - 1), dy(0, shape.y - 1),
        dz(0, shape.z - 1);
    for (std::size_t i = rows(gen); i > 0; --i) counts.add({dx(gen), dy(gen), dz(gen)});
    for (std::size_t x = 0; x < shape.x; ++x) {
      double sum_y = 0.0;
      for (std::size_t y = 0; y < shape.y; ++y) {
        double sum_z = 0.0;
        for (std::size_t z = 0; z < shape.z; ++z) sum_z += estimate_F_z(counts, x, y, z, {});
        const double F = estimate_F(counts, x, y, {});
        out.require(sum_z == F, fmt::format("table {}: decomposition {} != {}", iter, sum_z, F));
        sum_y += F;
      }
      out.require(sum_y >= 1.0, fmt::format("table {}: sum_y F = {}", iter, sum_y));
    }
  }

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int iter = 0; iter < 10000; ++iter) {
    const std::size_t ys = size(gen);
    std::vector<double> q(ys), F(ys);
    double total = 0.0;
    for (std::size_t y = 0; y < ys; ++y) {
      q[y] = unit(gen) < 0.2 ? 0.0 : unit(gen);
      total += q[y];
      F[y] = 0.01 + 3.0 * unit(gen);
    }
    if (total == 0.0) q[0] = total = 1.0;
    for (auto& v : q) v /= total;
    const AlternativeQ Q(q);
    const double a1 = std::exp(8.0 * unit(gen) - 4.0);
    const double a2 = a1 * (1.0 + 10.0 * unit(gen));
    const auto r1 = region(Q, F, a1), r2 = region(Q, F, a2);
    out.require(std::includes(r2.members.begin(), r2.members.end(), r1.members.begin(),
                              r1.members.end()),
                fmt::format("triple {}: region not nested", iter));
  }

  std::exponential_distribution<double> draw(1.0);
  for (int iter = 0; iter < 1000; ++iter) {
    const Shape shape{size(gen), size(gen), size(gen)};
    std::vector<double> w(shape.cells());
    double total = 0.0;
    for (auto& v : w) total += (v = draw(gen) + 1e-3);
    for (auto& v : w) v /= total;
    const JointModel model = validate_model(shape, std::move(w));
    for (std::size_t x = 0; x < shape.x; ++x) {
      const auto p = interventional_py(model, x).p;
      double sum = 0.0;
      for (const double v : p) sum += v;
      out.require(std::abs(sum - 1.0) <= 1e-9, fmt::format("model {}: sum p = {}", iter, sum));
    }
  }
  out.detail = "1e4 count tables, 1e4 region triples, 1e3 models";
  return out;
}

Outcome determinism(const fs::path& work) {
  Outcome out;
  RunConfig cfg;
  cfg.model_path = fixture("m1.json");
  cfg.x = "treated";
  cfg.n = 50;
  cfg.trials = kTrials;
  cfg.seed = kSeed;
  cfg.q = {"uniform", "point:survived", "point:died"};
  std::size_t files = 0;
  const CheckKind kinds[] = {CheckKind::Lemma1,      CheckKind::Validity, CheckKind::Lemma2,
                             CheckKind::Conditional, CheckKind::Slack,    CheckKind::Sweep};
  auto compare = [&](const fs::path& a, const fs::path& b, const std::string& what) {
    ++files;
    out.require(read_file(a) == read_file(b), what + " differs between runs");
  };
  for (const CheckKind kind : kinds) {
    const std::string name(to_string(kind));
    for (const char* run : {"a", "b"}) {
      cfg.out_dir = work / "determinism" / run / name;
      cmd_check(cfg, kind);
    }
    for (const char* file : {"report.json", "report.csv"}) {
      compare(work / "determinism/a" / name / file, work / "determinism/b" / name / file,
              name + "/" + file);
    }
  }
  RunConfig exact = cfg;
  exact.n = 3;
  for (const char* run : {"a", "b"}) {
    exact.out_dir = work / "determinism" / run / "exact";
    cmd_check(exact, CheckKind::Exact);
  }
  compare(work / "determinism/a/exact/report.json", work / "determinism/b/exact/report.json",
          "exact/report.json");
  RunConfig region = cfg;
  region.q = {"uniform"};
  region.alphas = {2.0, 10.0, 100.0};
  for (const char* run : {"a", "b"}) {
    region.out_dir = work / "determinism" / run / "region";
    cmd_region(region);
  }
  compare(work / "determinism/a/region/region.json", work / "determinism/b/region/region.json",
          "region.json");
  out.detail = fmt::format("{} report files byte-identical across repeated runs", files);
  return out;
}

Outcome regularization_sweep_check(const fs::path& work) {
  Outcome out;
  RunConfig cfg;
  cfg.model_path = fixture("m1.json");
  cfg.x = "treated";
  cfg.n = 50;
  cfg.trials = kTrials;
  cfg.seed = kSeed;
  cfg.c_values = {0.25, 0.5, 1.0};
  cfg.out_dir = work / "sweep";
  const int code = cmd_check(cfg, CheckKind::Sweep);
  out.require(code == kExitOk, fmt::format("sweep exited {}", code));
  const auto doc = nlohmann::json::parse(read_file(cfg.out_dir / "report.json"));
  const auto& table = doc.at("details").at("sweep");
  out.require(table.size() == 3, "sweep table needs three rows");
  std::string parts;
  for (const auto& row : table) {
    const double c = row.at("c").get<double>();
    double top = 0.0;
    for (const auto& r : row.at("per_y")) {
      top = std::max(top, r.at("estimate").get<double>());
      if (row.at("asserted").get<bool>()) {
        out.require(r.at("pass").get<bool>(), fmt::format("c=1 y={} fails", r.at("y").dump()));
      }
    }
    parts += fmt::format("{}c={:g}: max {:.4f}{}", parts.empty() ? "" : "; ", c, top,
                         row.at("empirical_violation").get<bool>() ? " (violation)" : "");
  }
  out.require(!read_file(cfg.out_dir / "report.csv").empty(), "sweep CSV is empty");
  out.detail = parts;
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::string work_dir = "acceptance_runs";
  app.add_option("--work-dir", work_dir, "scratch directory for report files");
  CLI11_PARSE(app, argc, argv);
  const fs::path work(work_dir);
  fs::remove_all(work);
  fs::create_directories(work);

  std::vector<ValidityReport> validity;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"exact expectation bound, M1 + 20 random models, N <= 3", exact_lemma1_holds},
      {"MC expectation bound on M1", mc_lemma1_m1},
      {"exact vs MC agreement", exact_vs_mc},
      {"validity integral and alpha-grid identity",
       [&] {
         validity = validity_runs();
         return validity_integral_check(validity);
       }},
      {"Markov envelope", [&] { return markov_envelope(validity); }},
      {"Y-oblivious strategies", lemma2_strategies},
      {"degenerate-X slack", slack_runs},
      {"factor bounds, exact and MC", conditional_bounds},
      {"structural invariants", structural_invariants},
      {"determinism", [&] { return determinism(work); }},
      {"regularization sweep", [&] { return regularization_sweep_check(work); }},
  };

  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = criteria[i].second();
    } catch (const std::exception& e) {
      outcome.pass = false;
      outcome.detail = fmt::format("threw: {}", e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    fmt::print("{} {:2d} {}: {} [{:.1f}s]\n", outcome.pass ? "PASS" : "FAIL", i + 1,
               criteria[i].first, outcome.detail, secs);
    for (const auto& f : outcome.failures) fmt::print("       {}\n", f);
    std::fflush(stdout);
    all = all && outcome.pass;
  }
  fmt::print("{}\n", all ? "all criteria pass" : "some criteria FAIL");
  return all ? 0 : 1;
}
