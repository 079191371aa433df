#include "causal_econf/rng.hpp"

namespace causal_econf {
namespace {
constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t mix64(std::uint64_t value) noexcept {
  value = (value ^ (value >> 30)) * 0xBF58476D1CE4E5B9ULL;
  value = (value ^ (value >> 27)) * 0x94D049BB133111EBULL;
  return value ^ (value >> 31);
}

Rng::Rng(RngSpec spec) noexcept : state_(mix64(spec.seed ^ mix64(spec.stream + kGamma))) {}

Rng::result_type Rng::operator()() noexcept {
  state_ += kGamma;
  return mix64(state_);
}

std::uint64_t Rng::below(std::uint64_t n) noexcept {
  const std::uint64_t limit = max() - max() % n;
  std::uint64_t draw = (*this)();
  while (draw >= limit) draw = (*this)();
  return draw % n;
}

}  // namespace causal_econf
