#include "causal_econf/sampling.hpp"

#include <algorithm>
#include <charconv>
#include <string>

#include <fmt/format.h>

#include "causal_econf/error.hpp"

namespace causal_econf {

void check_dataset(const Dataset& data, const Shape& shape) {
  for (std::size_t i = 0; i < data.rows.size(); ++i) {
    const auto& row = data.rows[i];
    if (row.x >= shape.x || row.y >= shape.y || row.z >= shape.z) {
      throw Error(ErrorCode::IndexOutOfRange,
                  fmt::format("row {} = ({},{},{}) outside shape {}x{}x{}", i, row.x, row.y,
                              row.z, shape.x, shape.y, shape.z));
    }
  }
}

Categorical::Categorical(std::span<const double> weights) : cdf_(weights.size()) {
  if (weights.empty()) throw Error(ErrorCode::EmptyAxis, "categorical with no categories");
  double total = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    total += weights[i];
    cdf_[i] = total;
  }
  // The last category absorbs whatever rounding left between the sum and 1.
  cdf_.back() = 1.0;
}

std::size_t Categorical::draw(Rng& rng) const noexcept {
  const double u = rng.uniform();
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  return std::min<std::size_t>(static_cast<std::size_t>(it - cdf_.begin()), cdf_.size() - 1);
}

// ---------------------------------------------------------------------------

namespace {

std::size_t constant_index(std::string_view arg) {
  std::size_t value = 0;
  const auto* end = arg.data() + arg.size();
  const auto [ptr, ec] = std::from_chars(arg.data(), end, value);
  if (arg.empty() || ec != std::errc{} || ptr != end) {
    throw Error(ErrorCode::Config, fmt::format("bad constant strategy argument '{}'", arg));
  }
  return value;
}

}  // namespace

XStrategy make_strategy(std::string_view name) {
  constexpr std::string_view kConstant = "constant:";
  if (name.starts_with(kConstant)) {
    const std::size_t k = constant_index(name.substr(kConstant.size()));
    return [k](const StrategyInput&, Rng&) { return k; };
  }
  if (name == "uniform") {
    return [](const StrategyInput& in, Rng& rng) {
      return static_cast<std::size_t>(rng.below(in.shape.x));
    };
  }
  if (name == "copy-z") {
    // X_n is the previous step's Z (folded into the X range); 0 on the first step.
    return [](const StrategyInput& in, Rng&) -> std::size_t {
      if (in.history.empty()) return 0;
      return in.history.back().z % in.shape.x;
    };
  }
  if (name == "majority-z") {
    // Most frequent past Z; any tie (including an empty history) gives 0.
    return [](const StrategyInput& in, Rng&) -> std::size_t {
      std::vector<std::size_t> freq(in.shape.z, 0);
      for (const auto& step : in.history) ++freq[step.z];
      const auto best = std::max_element(freq.begin(), freq.end());
      if (std::count(freq.begin(), freq.end(), *best) > 1) return 0;
      return static_cast<std::size_t>(best - freq.begin()) % in.shape.x;
    };
  }
  throw Error(ErrorCode::Config, fmt::format("unknown strategy '{}'", name));
}

std::vector<std::string_view> strategy_names() {
  return {"constant:<k>", "uniform", "copy-z", "majority-z"};
}

// ---------------------------------------------------------------------------

IidSampler::IidSampler(const JointModel& model)
    : shape_(model.shape()), cells_(model.table()) {}

void IidSampler::draw(std::size_t n, Rng& rng, Dataset& out) const {
  out.rows.resize(n);
  const std::size_t yz = shape_.y * shape_.z;
  for (auto& row : out.rows) {
    const std::size_t cell = cells_.draw(rng);
    row.x = cell / yz;
    row.y = (cell % yz) / shape_.z;
    row.z = cell % shape_.z;
  }
}

ObliviousSampler::ObliviousSampler(const JointModel& model, XStrategy strategy,
                                   ObliviousOptions options)
    : shape_(model.shape()),
      strategy_(std::move(strategy)),
      options_(options),
      z_mechanism_(marginal_z(model)) {
  y_mechanism_.reserve(shape_.x * shape_.z);
  for (std::size_t x = 0; x < shape_.x; ++x) {
    for (std::size_t z = 0; z < shape_.z; ++z) {
      y_mechanism_.emplace_back(conditional_y_given_xz(model, x, z));
    }
  }
}

void ObliviousSampler::draw(std::size_t n, Rng& rng, Dataset& out) const {
  out.rows.resize(n);
  std::vector<PastStep> history;
  history.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t z = z_mechanism_.draw(rng);
    StrategyInput input{history, std::nullopt, shape_};
    if (!options_.strict_past) input.current_z = z;
    const std::size_t x = strategy_(input, rng);
    if (x >= shape_.x) {
      throw Error(ErrorCode::StrategyRangeError,
                  fmt::format("strategy returned x={} at step {}, x_size={}", x, i, shape_.x));
    }
    const std::size_t y = y_mechanism_[x * shape_.z + z].draw(rng);
    out.rows[i] = {x, y, z};
    history.push_back({x, z});
  }
}

Dataset sample_iid(const JointModel& model, std::size_t n, RngSpec spec) {
  Rng rng(spec);
  Dataset out;
  IidSampler(model).draw(n, rng, out);
  return out;
}

Dataset sample_oblivious(const JointModel& model, const XStrategy& strategy, std::size_t n,
                         RngSpec spec, ObliviousOptions options) {
  Rng rng(spec);
  Dataset out;
  ObliviousSampler(model, strategy, options).draw(n, rng, out);
  return out;
}

std::size_t sample_mutilated_y(const JointModel& model, std::size_t x, RngSpec spec) {
  Rng rng(spec);
  return Categorical(interventional_py(model, x).p).draw(rng);
}

}  // namespace causal_econf
