#include "causal_econf/epredict.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "causal_econf/error.hpp"

namespace causal_econf {
namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0)) {
    throw Error(ErrorCode::NonPositiveAlpha, fmt::format("alpha={} must be > 0", alpha));
  }
}

void check_denominators(std::span<const double> F, std::size_t expected) {
  if (F.size() != expected) {
    throw Error(ErrorCode::InvalidArgument,
                fmt::format("estimate has {} labels, Q has {}", F.size(), expected));
  }
  for (std::size_t y = 0; y < F.size(); ++y) {
    if (!(F[y] > 0.0)) {
      throw Error(ErrorCode::NonPositiveF, fmt::format("F[{}]={} must be > 0", y, F[y]));
    }
  }
}

ERegion threshold_region(const AlternativeQ& q, std::span<const double> denom, double alpha) {
  check_alpha(alpha);
  check_denominators(denom, q.size());
  ERegion out{alpha, {}};
  for (std::size_t y = 0; y < q.size(); ++y) {
    if (q[y] / denom[y] < alpha) out.members.push_back(y);
  }
  return out;
}

}  // namespace

AlternativeQ::AlternativeQ(std::vector<double> q) : q_(std::move(q)) {
  if (q_.empty()) throw Error(ErrorCode::EmptyAxis, "alternative Q has no labels");
  double total = 0.0;
  for (std::size_t y = 0; y < q_.size(); ++y) {
    if (!(q_[y] >= 0.0) || !std::isfinite(q_[y])) {
      throw Error(ErrorCode::InvalidArgument, fmt::format("Q[{}]={} must be >= 0", y, q_[y]));
    }
    total += q_[y];
  }
  if (!(std::abs(total - 1.0) <= kNormalizationTolerance)) {
    throw Error(ErrorCode::NotNormalized, fmt::format("Q sums to {:.17g}", total));
  }
}

AlternativeQ AlternativeQ::uniform(std::size_t y_size) {
  if (y_size == 0) throw Error(ErrorCode::EmptyAxis, "alternative Q has no labels");
  return AlternativeQ(std::vector<double>(y_size, 1.0 / static_cast<double>(y_size)));
}

AlternativeQ AlternativeQ::point_mass(std::size_t y_size, std::size_t y_star) {
  if (y_star >= y_size) {
    throw Error(ErrorCode::IndexOutOfRange,
                fmt::format("point mass at {} outside y_size={}", y_star, y_size));
  }
  std::vector<double> q(y_size, 0.0);
  q[y_star] = 1.0;
  return AlternativeQ(std::move(q));
}

bool ERegion::contains(std::size_t y) const {
  return std::binary_search(members.begin(), members.end(), y);
}

double evariable(const AlternativeQ& q, std::span<const double> F, std::size_t y) {
  if (y >= q.size() || y >= F.size()) {
    throw Error(ErrorCode::IndexOutOfRange, fmt::format("label {} out of range", y));
  }
  if (!(F[y] > 0.0)) {
    throw Error(ErrorCode::NonPositiveF, fmt::format("F[{}]={} must be > 0", y, F[y]));
  }
  return q[y] / F[y];
}

ERegion region(const AlternativeQ& q, std::span<const double> F, double alpha) {
  return threshold_region(q, F, alpha);
}

ERegion oracle_region(const AlternativeQ& q, const InterventionalDist& p, double alpha) {
  return threshold_region(q, p.p, alpha);
}

bool in_region(const AlternativeQ& q, std::span<const double> F, double alpha, std::size_t y) {
  check_alpha(alpha);
  return evariable(q, F, y) < alpha;
}

std::vector<double> simple_conformal_phat(std::span<const std::uint64_t> y_counts,
                                          std::uint64_t n) {
  const std::uint64_t sum = std::accumulate(y_counts.begin(), y_counts.end(), std::uint64_t{0});
  if (sum != n) {
    throw Error(ErrorCode::CountMismatch, fmt::format("label counts sum to {}, N={}", sum, n));
  }
  std::vector<double> out(y_counts.size());
  const double denom = static_cast<double>(n) + 1.0;
  for (std::size_t y = 0; y < out.size(); ++y) {
    out[y] = (static_cast<double>(y_counts[y]) + 1.0) / denom;
  }
  return out;
}

double conditional_conformal_ratio(std::uint64_t n_x, std::uint64_t n_xy) {
  if (n_xy > n_x) {
    throw Error(ErrorCode::CountMismatch,
                fmt::format("pair count {} exceeds object count {}", n_xy, n_x));
  }
  return (static_cast<double>(n_x) + 1.0) / (static_cast<double>(n_xy) + 1.0);
}

double conditional_conformal_ratio(const CountTable& counts, std::size_t x, std::size_t y,
                                   std::size_t z) {
  return conditional_conformal_ratio(counts.n_xz(x, z), counts.n_xyz(x, y, z));
}

}  // namespace causal_econf
