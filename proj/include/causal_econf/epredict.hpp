#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "causal_econf/estimator.hpp"
#include "causal_econf/model.hpp"

namespace causal_econf {

/// Alternative measure Q on Y. Zeros are allowed.
class AlternativeQ {
 public:
  /// Validates entries >= 0 and sum within 1e-9 of 1.
  explicit AlternativeQ(std::vector<double> q);

  static AlternativeQ uniform(std::size_t y_size);
  static AlternativeQ point_mass(std::size_t y_size, std::size_t y_star);

  std::span<const double> values() const noexcept { return q_; }
  double operator[](std::size_t y) const { return q_.at(y); }
  std::size_t size() const noexcept { return q_.size(); }

 private:
  std::vector<double> q_;
};

/// An e-prediction region at one significance level.
struct ERegion {
  double alpha = 0.0;
  std::vector<std::size_t> members;  // ascending y

  bool contains(std::size_t y) const;
};

/// q[y] / F[y].
double evariable(const AlternativeQ& q, std::span<const double> F, std::size_t y);

/// {y : q[y] / F[y] < alpha}, strict.
ERegion region(const AlternativeQ& q, std::span<const double> F, double alpha);

/// Same as region() with the true interventional p_y in the denominator.
ERegion oracle_region(const AlternativeQ& q, const InterventionalDist& p, double alpha);

/// Whether y would be in region(q, F, alpha), without materializing the set.
bool in_region(const AlternativeQ& q, std::span<const double> F, double alpha, std::size_t y);

// --- conformal e-prediction baselines ---------------------------------------

/// p_hat(y) = (count_y + 1) / (N + 1). A super-probability: sums to (N+|Y|)/(N+1).
std::vector<double> simple_conformal_phat(std::span<const std::uint64_t> y_counts,
                                          std::uint64_t n);

/// (|{X_n = x}| + 1) / (|{(X_n, Y_n) = (x, y)}| + 1); 0/0 reads as 1.
double conditional_conformal_ratio(std::uint64_t n_x, std::uint64_t n_xy);

/// Object-conditional ratio with the pair (X, Z) as the object.
double conditional_conformal_ratio(const CountTable& counts, std::size_t x, std::size_t y,
                                   std::size_t z);

}  // namespace causal_econf
