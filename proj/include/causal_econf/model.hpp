#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace causal_econf {

/// Category counts of the three axes. Categories are dense 0-based indices.
struct Shape {
  std::size_t x = 0;
  std::size_t y = 0;
  std::size_t z = 0;

  std::size_t cells() const noexcept { return x * y * z; }
  /// Row-major (x, y, z) offset, x slowest.
  std::size_t offset(std::size_t xi, std::size_t yi, std::size_t zi) const noexcept {
    return (xi * y + yi) * z + zi;
  }

  friend bool operator==(const Shape&, const Shape&) = default;
};

inline constexpr double kPositivityFloor = 1e-12;
inline constexpr double kNormalizationTolerance = 1e-9;

/// A strictly positive joint distribution on X x Y x Z.
///
/// Only constructible through validate_model(), so every instance satisfies
/// the positivity and normalization invariants. Immutable.
class JointModel {
 public:
  const Shape& shape() const noexcept { return shape_; }
  std::size_t x_size() const noexcept { return shape_.x; }
  std::size_t y_size() const noexcept { return shape_.y; }
  std::size_t z_size() const noexcept { return shape_.z; }

  double prob(std::size_t x, std::size_t y, std::size_t z) const;
  /// Flattened table in row-major (x, y, z) order.
  std::span<const double> table() const noexcept { return probs_; }

 private:
  JointModel(Shape shape, std::vector<double> probs)
      : shape_(shape), probs_(std::move(probs)) {}

  friend JointModel validate_model(Shape shape, std::vector<double> probs);

  Shape shape_;
  std::vector<double> probs_;
};

/// Y's law in the mutilated model where X has been set to `x`.
struct InterventionalDist {
  std::size_t x = 0;
  std::vector<double> p;
};

/// Checks dimensions, positivity (>= 1e-12) and normalization (|sum - 1| <= 1e-9).
/// Never re-normalizes.
JointModel validate_model(Shape shape, std::vector<double> probs);

std::vector<double> marginal_z(const JointModel& model);

std::vector<double> conditional_y_given_xz(const JointModel& model, std::size_t x,
                                           std::size_t z);

/// p_y = sum_z P(Z=z) P(Y=y | X=x, Z=z), ascending z.
InterventionalDist interventional_py(const JointModel& model, std::size_t x);

/// The single-z summand P(Z=z) P(Y=y | X=x, Z=z) of interventional_py.
double p_yz(const JointModel& model, std::size_t x, std::size_t y, std::size_t z);

}  // namespace causal_econf
