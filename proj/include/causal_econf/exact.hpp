#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "causal_econf/model.hpp"

namespace causal_econf {

using Rational = mpq_class;

/// num/den in canonical form (gmpxx leaves pair-constructed values unreduced).
Rational ratio(long num, unsigned long den);

/// Parses "p/q", an integer, or a plain decimal such as "0.125" into an exact
/// rational. Throws NotRational on anything else.
Rational parse_rational(std::string_view text);

/// Rendering used in reports: "num/den" in lowest terms.
std::string to_string(const Rational& value);

/// A joint model with exact rational cells. Positivity is checked as > 0 and
/// normalization as an exact equality with 1.
class RationalModel {
 public:
  RationalModel(Shape shape, std::vector<Rational> probs);

  const Shape& shape() const noexcept { return shape_; }
  const Rational& prob(std::size_t x, std::size_t y, std::size_t z) const;
  const std::vector<Rational>& table() const noexcept { return probs_; }

  /// Double-precision view through validate_model().
  JointModel to_joint() const;

 private:
  Shape shape_;
  std::vector<Rational> probs_;
};

inline constexpr std::uint64_t kEnumerationBudget = 10'000'000;

/// (cells)^N, saturating; used for the enumeration budget check.
std::uint64_t dataset_count(const Shape& shape, std::size_t n);

/// Exact interventional p_y for every y.
std::vector<Rational> exact_interventional(const RationalModel& model, std::size_t x);

struct ExactValue {
  Rational value;
  Rational bound;

  bool holds() const { return value <= bound; }
};

/// E[p_y / F_y] per y over every dataset of size n, with F_y in exact arithmetic.
struct ExactReport {
  std::size_t x = 0;
  std::size_t n = 0;
  Rational c;
  std::uint64_t datasets = 0;
  std::vector<ExactValue> per_y;  // bound is 1
};

ExactReport exact_lemma1(const RationalModel& model, std::size_t x, std::size_t n,
                         const Rational& c = Rational(1),
                         std::uint64_t budget = kEnumerationBudget);

/// The two factor bounds multiplied in the proof of the main inequality:
/// E[(N+1)/(n_z+1)] <= 1/P(Z=z) and E[(n_xz+1)/(n_xyz+1)] <= 1/P(Y=y|X=x,Z=z).
struct ExactConditionalReport {
  std::size_t x = 0;
  std::size_t y = 0;
  std::size_t z = 0;
  std::size_t n = 0;
  std::uint64_t datasets = 0;
  ExactValue z_bound;
  ExactValue conditional_bound;
};

ExactConditionalReport exact_conditional_bounds(const RationalModel& model, std::size_t x,
                                                std::size_t y, std::size_t z, std::size_t n,
                                                std::uint64_t budget = kEnumerationBudget);

}  // namespace causal_econf
