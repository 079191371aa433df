#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "causal_econf/model.hpp"
#include "causal_econf/rng.hpp"

namespace causal_econf {

struct Observation {
  std::size_t x = 0;
  std::size_t y = 0;
  std::size_t z = 0;

  friend bool operator==(const Observation&, const Observation&) = default;
};

struct Dataset {
  std::vector<Observation> rows;

  std::size_t size() const noexcept { return rows.size(); }
  friend bool operator==(const Dataset&, const Dataset&) = default;
};

/// Throws IndexOutOfRange if any row falls outside `shape`.
void check_dataset(const Dataset& data, const Shape& shape);

/// Inverse-CDF draw over a fixed finite distribution.
class Categorical {
 public:
  explicit Categorical(std::span<const double> weights);

  std::size_t draw(Rng& rng) const noexcept;
  std::size_t size() const noexcept { return cdf_.size(); }

 private:
  std::vector<double> cdf_;
};

// ---------------------------------------------------------------------------
// Y-oblivious strategies
// ---------------------------------------------------------------------------

/// One completed step of the sequential protocol as seen by a strategy.
/// There is deliberately no Y field.
struct PastStep {
  std::size_t x = 0;
  std::size_t z = 0;
};

struct StrategyInput {
  std::span<const PastStep> history;
  /// The current Z_n; empty when the sampler runs in strict-past mode.
  std::optional<std::size_t> current_z;
  Shape shape;
};

/// Chooses X_n. May draw from `rng`; must return an index below shape.x.
using XStrategy = std::function<std::size_t(const StrategyInput&, Rng&)>;

/// Built-in registry: "constant:<k>", "uniform", "copy-z", "majority-z".
/// Throws Config for unknown names.
XStrategy make_strategy(std::string_view name);

std::vector<std::string_view> strategy_names();

struct ObliviousOptions {
  bool strict_past = false;
};

// ---------------------------------------------------------------------------
// Samplers. Each is a pure function of its arguments and the RngSpec.
// ---------------------------------------------------------------------------

/// Precomputed tables for repeated IID draws from one model.
class IidSampler {
 public:
  explicit IidSampler(const JointModel& model);

  void draw(std::size_t n, Rng& rng, Dataset& out) const;

 private:
  Shape shape_;
  Categorical cells_;
};

/// Precomputed Z and Y|(X,Z) mechanisms for the sequential setting.
class ObliviousSampler {
 public:
  ObliviousSampler(const JointModel& model, XStrategy strategy, ObliviousOptions options = {});

  void draw(std::size_t n, Rng& rng, Dataset& out) const;

 private:
  Shape shape_;
  XStrategy strategy_;
  ObliviousOptions options_;
  Categorical z_mechanism_;
  std::vector<Categorical> y_mechanism_;  // indexed x * z_size + z
};

Dataset sample_iid(const JointModel& model, std::size_t n, RngSpec rng);

Dataset sample_oblivious(const JointModel& model, const XStrategy& strategy, std::size_t n,
                         RngSpec rng, ObliviousOptions options = {});

/// Draws Y_{N+1} from the interventional distribution at `x`.
std::size_t sample_mutilated_y(const JointModel& model, std::size_t x, RngSpec rng);

}  // namespace causal_econf
