#include "causal_econf/experiments.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "causal_econf/error.hpp"
#include "causal_econf/exact.hpp"
#include "parallel.hpp"

namespace causal_econf {
namespace {

double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0.0;
    for (const double value : v) s += value;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

void check_config(const McConfig& cfg) {
  if (cfg.trials < kMinTrials) {
    throw Error(ErrorCode::InvalidArgument,
                fmt::format("trials={} below the minimum {} for a pass/fail claim", cfg.trials,
                            kMinTrials));
  }
}

void check_c(double c) {
  if (!(c > 0.0)) throw Error(ErrorCode::NonPositiveC, fmt::format("c={} must be > 0", c));
}

void check_x(const JointModel& model, std::size_t x) {
  if (x >= model.x_size()) {
    throw Error(ErrorCode::IndexOutOfRange,
                fmt::format("x={} outside x_size={}", x, model.x_size()));
  }
}

// Trial-major table of per-trial values.
class TrialTable {
 public:
  TrialTable(std::uint64_t trials, std::size_t columns)
      : columns_(columns), values_(trials * columns) {}

  std::span<double> row(std::uint64_t t) { return {values_.data() + t * columns_, columns_}; }

  std::vector<double> column(std::size_t c) const {
    std::vector<double> out(values_.size() / columns_);
    for (std::size_t t = 0; t < out.size(); ++t) out[t] = values_[t * columns_ + c];
    return out;
  }

 private:
  std::size_t columns_;
  std::vector<double> values_;
};

MCReport make_report(std::string quantity, std::optional<std::size_t> y,
                     std::span<const double> values, const McConfig& cfg, double c,
                     std::size_t n, double bound) {
  const Moments m = moments(values);
  MCReport r;
  r.quantity = std::move(quantity);
  r.y = y;
  r.estimate = m.mean;
  r.std_error = m.std_error;
  r.trials = values.size();
  r.seed = cfg.seed;
  r.c = c;
  r.n = n;
  r.bound = bound;
  r.pass = r.estimate <= bound + cfg.sigmas * r.std_error;
  return r;
}

template <typename Sampler>
std::vector<MCReport> ratio_reports(const JointModel& model, const Sampler& sampler,
                                    std::size_t x, std::size_t n, Regularization reg,
                                    const McConfig& cfg, const std::string& quantity) {
  check_config(cfg);
  check_x(model, x);
  check_c(reg.c);
  const Shape shape = model.shape();
  const std::vector<double> p = interventional_py(model, x).p;
  TrialTable table(cfg.trials, shape.y);
  detail::for_each_trial(cfg.trials, cfg.threads, [&] {
    return [&, data = Dataset{}, counts = CountTable(shape)](std::uint64_t t) mutable {
      Rng rng({cfg.seed, t});
      sampler.draw(n, rng, data);
      counts.clear();
      for (const auto& row : data.rows) counts.add(row);
      auto out = table.row(t);
      for (std::size_t y = 0; y < shape.y; ++y) out[y] = p[y] / estimate_F(counts, x, y, reg);
    };
  });
  std::vector<MCReport> reports;
  for (std::size_t y = 0; y < shape.y; ++y) {
    reports.push_back(make_report(quantity, y, table.column(y), cfg, reg.c, n, 1.0));
  }
  return reports;
}

ErrorPoint bernoulli_point(double alpha, std::uint64_t hits, std::uint64_t trials,
                           double sigmas) {
  ErrorPoint pt;
  pt.alpha = alpha;
  const double nt = static_cast<double>(trials);
  pt.rate = static_cast<double>(hits) / nt;
  // sample variance of 0/1 values: hits (trials - hits) / (trials (trials - 1))
  const double var =
      static_cast<double>(hits) * static_cast<double>(trials - hits) / (nt * (nt - 1.0));
  pt.std_error = std::sqrt(var / nt);
  pt.envelope = 1.0 / alpha;
  pt.pass = pt.rate <= pt.envelope + sigmas * pt.std_error;
  return pt;
}

}  // namespace

Moments moments(std::span<const double> values) {
  Moments m;
  if (values.empty()) return m;
  const double n = static_cast<double>(values.size());
  m.mean = pairwise_sum(values) / n;
  if (values.size() < 2) return m;
  std::vector<double> sq(values.size());
  std::transform(values.begin(), values.end(), sq.begin(), [&](double v) {
    const double d = v - m.mean;
    return d * d;
  });
  m.std_error = std::sqrt(pairwise_sum(sq) / (n - 1.0) / n);
  return m;
}

bool agrees_with(const MCReport& report, double reference, double sigmas) {
  const double floor = 1e-12 * std::max(1.0, std::abs(reference));
  return std::abs(report.estimate - reference) <= sigmas * report.std_error + floor;
}

RngSpec mutilated_stream(std::uint64_t seed, std::uint64_t trial) noexcept {
  return {seed ^ 0xD1B54A32D192ED03ULL, trial};
}

std::vector<MCReport> mc_lemma1(const JointModel& model, std::size_t x, std::size_t n,
                                Regularization reg, const McConfig& cfg) {
  return ratio_reports(model, IidSampler(model), x, n, reg, cfg, "lemma1");
}

std::vector<MCReport> adversarial_lemma2(const JointModel& model, const XStrategy& strategy,
                                         std::size_t x, std::size_t n, Regularization reg,
                                         const McConfig& cfg, ObliviousOptions options) {
  return ratio_reports(model, ObliviousSampler(model, strategy, options), x, n, reg, cfg,
                       "lemma2");
}

std::vector<double> log_spaced(const AlphaGrid& grid) {
  if (!(grid.lo > 0.0) || !(grid.hi > grid.lo) || grid.points < 2) {
    throw Error(ErrorCode::InvalidArgument, "alpha grid needs 0 < lo < hi and >= 2 points");
  }
  std::vector<double> out(grid.points);
  const double a = std::log10(grid.lo), b = std::log10(grid.hi);
  for (std::size_t i = 0; i < grid.points; ++i) {
    out[i] = std::pow(10.0, a + (b - a) * static_cast<double>(i) /
                                    static_cast<double>(grid.points - 1));
  }
  out.front() = grid.lo;
  out.back() = grid.hi;
  return out;
}

ValidityReport validity_integral(const JointModel& model, std::size_t x, const AlternativeQ& q,
                                 std::size_t n, Regularization reg, const McConfig& cfg,
                                 const AlphaGrid& grid, std::vector<double> markov_levels) {
  check_config(cfg);
  check_x(model, x);
  check_c(reg.c);
  if (q.size() != model.y_size()) {
    throw Error(ErrorCode::InvalidArgument,
                fmt::format("Q has {} labels, model has {}", q.size(), model.y_size()));
  }
  const Shape shape = model.shape();
  const std::vector<double> alphas = log_spaced(grid);
  std::vector<double> levels = alphas;
  levels.insert(levels.end(), markov_levels.begin(), markov_levels.end());

  const IidSampler sampler(model);
  const Categorical mutilated(interventional_py(model, x).p);
  std::vector<double> e_values(cfg.trials);
  std::vector<std::uint8_t> misses(cfg.trials * levels.size());

  detail::for_each_trial(cfg.trials, cfg.threads, [&] {
    return [&, data = Dataset{}, counts = CountTable(shape)](std::uint64_t t) mutable {
      Rng rng({cfg.seed, t});
      sampler.draw(n, rng, data);
      counts.clear();
      for (const auto& row : data.rows) counts.add(row);
      const std::vector<double> F = estimate_F_vector(counts, x, reg);
      Rng y_rng(mutilated_stream(cfg.seed, t));
      const std::size_t y_next = mutilated.draw(y_rng);
      e_values[t] = evariable(q, F, y_next);
      for (std::size_t k = 0; k < levels.size(); ++k) {
        misses[t * levels.size() + k] = region(q, F, levels[k]).contains(y_next) ? 0 : 1;
      }
    };
  });

  ValidityReport report;
  report.grid = grid;
  report.mean_e = make_report("validity", std::nullopt, e_values, cfg, reg.c, n, 1.0);
  for (std::size_t k = 0; k < levels.size(); ++k) {
    std::uint64_t hits = 0;
    for (std::uint64_t t = 0; t < cfg.trials; ++t) hits += misses[t * levels.size() + k];
    auto pt = bernoulli_point(levels[k], hits, cfg.trials, cfg.sigmas);
    (k < alphas.size() ? report.curve : report.markov).push_back(pt);
  }
  for (std::size_t i = 0; i + 1 < report.curve.size(); ++i) {
    report.grid_integral += 0.5 * (report.curve[i].rate + report.curve[i + 1].rate) *
                            (report.curve[i + 1].alpha - report.curve[i].alpha);
  }
  std::vector<double> clamped(e_values.size()), below(e_values.size());
  for (std::size_t t = 0; t < e_values.size(); ++t) {
    clamped[t] = std::clamp(e_values[t], grid.lo, grid.hi) - grid.lo;
    below[t] = std::min(e_values[t], grid.lo);
  }
  report.truncated_expectation = moments(clamped).mean;
  report.tail_below = moments(below).mean;
  report.relative_gap =
      std::abs(report.grid_integral - report.truncated_expectation) / report.truncated_expectation;
  report.grid_agrees = report.relative_gap <= kGridAgreementTolerance;
  const auto qv = q.values();
  const double q_max = *std::max_element(qv.begin(), qv.end());
  report.e_upper_bound = q_max * (static_cast<double>(n) + reg.c) /
                         (static_cast<double>(shape.z) * reg.c);
  report.tail_above_bound = std::max(0.0, report.e_upper_bound - grid.hi);
  return report;
}

SlackReport slack_experiment(const JointModel& model, std::size_t x, std::size_t n,
                             const McConfig& cfg) {
  return slack_experiment(model, make_strategy(fmt::format("constant:{}", x)), x, n, cfg);
}

SlackReport slack_experiment(const JointModel& model, const XStrategy& strategy, std::size_t x,
                             std::size_t n, const McConfig& cfg) {
  check_config(cfg);
  check_x(model, x);
  const Shape shape = model.shape();
  const std::size_t ys = shape.y;
  const std::vector<double> p = interventional_py(model, x).p;
  const ObliviousSampler sampler(model, strategy);
  const Regularization reg{1.0};
  const double n_plus_one = static_cast<double>(n) + 1.0;

  // per trial and y: lemma value, conformal value, |F - closed| / closed, exact mismatch
  TrialTable table(cfg.trials, 4 * ys);
  detail::for_each_trial(cfg.trials, cfg.threads, [&] {
    return [&, data = Dataset{}, counts = CountTable(shape),
            y_counts = std::vector<std::uint64_t>(ys)](std::uint64_t t) mutable {
      Rng rng({cfg.seed, t});
      sampler.draw(n, rng, data);
      counts.clear();
      for (const auto& row : data.rows) {
        if (row.x != x) {
          throw Error(ErrorCode::NotDegenerate,
                      fmt::format("trial {} realized X={} while X is held at {}", t, row.x, x));
        }
        counts.add(row);
      }
      for (std::size_t y = 0; y < ys; ++y) {
        y_counts[y] = 0;
        for (std::size_t z = 0; z < shape.z; ++z) y_counts[y] += counts.n_xyz(x, y, z);
      }
      const std::vector<double> phat = simple_conformal_phat(y_counts, n);
      auto out = table.row(t);
      for (std::size_t y = 0; y < ys; ++y) {
        const double F = estimate_F(counts, x, y, reg);
        const double closed =
            (static_cast<double>(y_counts[y]) + static_cast<double>(shape.z)) / n_plus_one;
        out[4 * y] = p[y] / F;
        out[4 * y + 1] = p[y] / phat[y];
        out[4 * y + 2] = std::abs(F - closed) / closed;

        Rational exact(0);
        const Rational total(static_cast<unsigned long>(n + 1));
        for (std::size_t z = 0; z < shape.z; ++z) {
          exact += Rational(static_cast<unsigned long>(counts.n_z(z) + 1)) / total *
                   Rational(static_cast<unsigned long>(counts.n_xyz(x, y, z) + 1)) /
                   Rational(static_cast<unsigned long>(counts.n_xz(x, z) + 1));
        }
        const Rational closed_exact = ratio(static_cast<long>(y_counts[y] + shape.z),
                                            static_cast<unsigned long>(n + 1));
        out[4 * y + 3] = exact == closed_exact ? 0.0 : 1.0;
      }
    };
  });

  SlackReport report{x, n, shape.z, {}};
  for (std::size_t y = 0; y < ys; ++y) {
    SlackRow row;
    row.y = y;
    const auto lemma = table.column(4 * y);
    const auto conformal = table.column(4 * y + 1);
    row.lemma = make_report("slack_lemma", y, lemma, cfg, 1.0, n, 1.0);
    row.conformal = make_report("slack_conformal", y, conformal, cfg, 1.0, n, 1.0);
    const auto rel = table.column(4 * y + 2);
    row.max_closed_form_rel_error = *std::max_element(rel.begin(), rel.end());
    const auto mismatch = table.column(4 * y + 3);
    row.closed_form_mismatches =
        static_cast<std::uint64_t>(std::count(mismatch.begin(), mismatch.end(), 1.0));
    row.coincide = lemma == conformal;
    row.ordered = row.lemma.estimate <= row.conformal.estimate;
    report.rows.push_back(std::move(row));
  }
  return report;
}

std::vector<SweepRow> regularization_sweep(const JointModel& model, std::size_t x, std::size_t n,
                                           std::span<const double> c_values,
                                           const McConfig& cfg) {
  for (const double c : c_values) check_c(c);
  std::vector<SweepRow> rows;
  for (const double c : c_values) {
    SweepRow row;
    row.c = c;
    row.per_y = mc_lemma1(model, x, n, {c}, cfg);
    for (auto& r : row.per_y) r.quantity = "sweep";
    row.asserted = c == 1.0;
    rows.push_back(std::move(row));
  }
  return rows;
}

ConditionalMCReport mc_conditional_bounds(const JointModel& model, std::size_t x, std::size_t y,
                                          std::size_t z, std::size_t n, const McConfig& cfg) {
  check_config(cfg);
  check_x(model, x);
  const Shape shape = model.shape();
  if (y >= shape.y || z >= shape.z) {
    throw Error(ErrorCode::IndexOutOfRange, fmt::format("(y={}, z={}) out of range", y, z));
  }
  const IidSampler sampler(model);
  TrialTable table(cfg.trials, 2);
  detail::for_each_trial(cfg.trials, cfg.threads, [&] {
    return [&, data = Dataset{}, counts = CountTable(shape)](std::uint64_t t) mutable {
      Rng rng({cfg.seed, t});
      sampler.draw(n, rng, data);
      counts.clear();
      for (const auto& row : data.rows) counts.add(row);
      auto out = table.row(t);
      out[0] = (static_cast<double>(n) + 1.0) / (static_cast<double>(counts.n_z(z)) + 1.0);
      out[1] = conditional_conformal_ratio(counts, x, y, z);
    };
  });
  const double pz = marginal_z(model)[z];
  const double py = conditional_y_given_xz(model, x, z)[y];
  ConditionalMCReport report;
  report.z_factor = make_report("conditional_z", y, table.column(0), cfg, 1.0, n, 1.0 / pz);
  report.conditional =
      make_report("conditional_xz", y, table.column(1), cfg, 1.0, n, 1.0 / py);
  return report;
}

}  // namespace causal_econf
