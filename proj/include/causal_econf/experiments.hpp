#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "causal_econf/epredict.hpp"
#include "causal_econf/estimator.hpp"
#include "causal_econf/model.hpp"
#include "causal_econf/rng.hpp"
#include "causal_econf/sampling.hpp"

namespace causal_econf {

inline constexpr std::uint64_t kMinTrials = 1000;
inline constexpr double kDefaultSigmas = 4.0;

/// Monte Carlo run parameters. Trial t draws from RngSpec{seed, t}.
struct McConfig {
  std::uint64_t trials = 100'000;
  std::uint64_t seed = 0;
  /// Worker threads; 0 means hardware concurrency. Results do not depend on it.
  unsigned threads = 0;
  /// Pass iff estimate <= bound + sigmas * std_error.
  double sigmas = kDefaultSigmas;
};

struct MCReport {
  std::string quantity;
  std::optional<std::size_t> y;
  double estimate = 0.0;
  double std_error = 0.0;  // sample standard deviation / sqrt(trials)
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  double c = 1.0;
  std::size_t n = 0;
  double bound = 1.0;
  bool pass = false;
};

/// |estimate - reference| <= sigmas * std_error, with a roundoff floor of
/// 1e-12 * max(1, |reference|) for deterministic (zero-variance) estimates.
bool agrees_with(const MCReport& report, double reference, double sigmas = kDefaultSigmas);

/// Mean and standard error of `values` reduced in index order with pairwise
/// summation.
struct Moments {
  double mean = 0.0;
  double std_error = 0.0;
};
Moments moments(std::span<const double> values);

/// Stream for Y_{N+1} in trial t; disjoint from the dataset stream {seed, t}.
RngSpec mutilated_stream(std::uint64_t seed, std::uint64_t trial) noexcept;

// ---------------------------------------------------------------------------

/// E[p_y / F_y] over IID datasets, one report per y.
std::vector<MCReport> mc_lemma1(const JointModel& model, std::size_t x, std::size_t n,
                                Regularization reg, const McConfig& cfg);

/// Same quantity with datasets from the Y-oblivious sequential sampler.
std::vector<MCReport> adversarial_lemma2(const JointModel& model, const XStrategy& strategy,
                                         std::size_t x, std::size_t n, Regularization reg,
                                         const McConfig& cfg, ObliviousOptions options = {});

struct ErrorPoint {
  double alpha = 0.0;
  double rate = 0.0;  // P(Y_{N+1} not in region at alpha)
  double std_error = 0.0;
  double envelope = 0.0;  // 1 / alpha
  bool pass = false;      // rate <= envelope + sigmas * std_error
};

struct AlphaGrid {
  double lo = 0.01;
  double hi = 1000.0;
  std::size_t points = 50;
};

std::vector<double> log_spaced(const AlphaGrid& grid);

struct ValidityReport {
  MCReport mean_e;
  /// Direct region evaluation at each grid point.
  std::vector<ErrorPoint> curve;
  /// Direct region evaluation at the Markov check levels.
  std::vector<ErrorPoint> markov;
  AlphaGrid grid;
  double grid_integral = 0.0;          // trapezoid of curve over the grid
  double truncated_expectation = 0.0;  // E[clamp(E, lo, hi)] - lo
  double relative_gap = 0.0;           // |grid - truncated| / truncated
  bool grid_agrees = false;            // relative_gap <= 0.02
  /// Analytic cap on E: max_y q[y] * (N + c) / (|Z| c).
  double e_upper_bound = 0.0;
  /// E[min(E, lo)] <= lo: mass of the integral left of the grid.
  double tail_below = 0.0;
  /// Upper bound on the integral right of the grid.
  double tail_above_bound = 0.0;
};

inline constexpr double kGridAgreementTolerance = 0.02;

ValidityReport validity_integral(const JointModel& model, std::size_t x, const AlternativeQ& q,
                                 std::size_t n, Regularization reg, const McConfig& cfg,
                                 const AlphaGrid& grid = {},
                                 std::vector<double> markov_levels = {2.0, 10.0, 100.0});

struct SlackRow {
  std::size_t y = 0;
  MCReport lemma;      // E[p_y / ((k + |Z|) / (N + 1))]
  MCReport conformal;  // E[p_y / ((k + 1) / (N + 1))]
  std::uint64_t closed_form_mismatches = 0;  // exact rational check per dataset
  double max_closed_form_rel_error = 0.0;    // double path vs closed form
  bool coincide = false;                     // per-trial values bitwise equal
  bool ordered = false;                      // lemma.estimate <= conformal.estimate
};

struct SlackReport {
  std::size_t x = 0;
  std::size_t n = 0;
  std::size_t z_size = 0;
  std::vector<SlackRow> rows;
};

/// X held at `x` by the constant strategy; c = 1. Throws NotDegenerate when
/// `strategy` puts any X_n elsewhere.
SlackReport slack_experiment(const JointModel& model, std::size_t x, std::size_t n,
                             const McConfig& cfg);
SlackReport slack_experiment(const JointModel& model, const XStrategy& strategy, std::size_t x,
                             std::size_t n, const McConfig& cfg);

struct SweepRow {
  double c = 1.0;
  std::vector<MCReport> per_y;
  bool asserted = false;  // only c == 1 carries a proven bound
};

std::vector<SweepRow> regularization_sweep(const JointModel& model, std::size_t x, std::size_t n,
                                           std::span<const double> c_values, const McConfig& cfg);

/// MC estimates of E[(N+1)/(n_z+1)] (bound 1/P(Z=z)) and E[(n_xz+1)/(n_xyz+1)]
/// (bound 1/P(Y=y|X=x,Z=z)).
struct ConditionalMCReport {
  MCReport z_factor;
  MCReport conditional;
};

ConditionalMCReport mc_conditional_bounds(const JointModel& model, std::size_t x, std::size_t y,
                                          std::size_t z, std::size_t n, const McConfig& cfg);

}  // namespace causal_econf
