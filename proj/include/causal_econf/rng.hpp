#pragma once

#include <cstdint>
#include <limits>

namespace causal_econf {

/// Identifies one reproducible random stream.
struct RngSpec {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

/// SplitMix64 generator keyed by (seed, stream).
///
/// The initial state is mix64(seed ^ mix64(stream + 0x9E3779B97F4A7C15)); each
/// draw advances the state by 0x9E3779B97F4A7C15 and returns mix64(state),
/// where mix64 is the SplitMix64 finalizer. Uniform doubles take the top 53
/// bits. Everything is integer arithmetic, so output is identical on every
/// platform.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(RngSpec spec) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept;

  /// Uniform on [0, 1).
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n); n must be > 0. Uses rejection to stay unbiased.
  std::uint64_t below(std::uint64_t n) noexcept;

 private:
  std::uint64_t state_;
};

std::uint64_t mix64(std::uint64_t value) noexcept;

}  // namespace causal_econf
