#include "causal_econf/exact.hpp"

#include <algorithm>
#include <cctype>
#include <limits>

#include <fmt/format.h>

#include "causal_econf/error.hpp"

namespace causal_econf {
namespace {

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char ch) {
    return std::isdigit(ch) != 0;
  });
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

[[noreturn]] void not_rational(std::string_view text) {
  throw Error(ErrorCode::NotRational, fmt::format("'{}' is not an exact rational literal", text));
}

// Odometer over every sequence of n cell indices; calls fn(cells, weight) with
// the exact product probability of the sequence.
template <typename Fn>
std::uint64_t for_each_dataset(const RationalModel& model, std::size_t n, std::uint64_t budget,
                               Fn&& fn) {
  const std::uint64_t total = dataset_count(model.shape(), n);
  if (total > budget) {
    throw Error(ErrorCode::BudgetExceeded,
                fmt::format("{} cells ^ N={} exceeds the enumeration budget {}",
                            model.shape().cells(), n, budget));
  }
  const auto& table = model.table();
  const std::size_t k = table.size();
  std::vector<std::size_t> cells(n, 0);
  // prefix[i] = product of the first i cell probabilities
  std::vector<Rational> prefix(n + 1, Rational(1));
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] * table[0];
  std::uint64_t visited = 0;
  while (true) {
    fn(cells, prefix[n]);
    ++visited;
    std::size_t pos = n;
    while (pos > 0 && cells[pos - 1] + 1 == k) --pos;
    if (pos == 0) break;
    ++cells[pos - 1];
    for (std::size_t i = pos; i < n; ++i) cells[i] = 0;
    for (std::size_t i = pos - 1; i < n; ++i) prefix[i + 1] = prefix[i] * table[cells[i]];
  }
  return visited;
}

struct Decoded {
  std::size_t x, y, z;
};

Decoded decode(const Shape& s, std::size_t cell) {
  const std::size_t yz = s.y * s.z;
  return {cell / yz, (cell % yz) / s.z, cell % s.z};
}

Rational z_marginal(const RationalModel& model, std::size_t z) {
  Rational total(0);
  for (std::size_t x = 0; x < model.shape().x; ++x) {
    for (std::size_t y = 0; y < model.shape().y; ++y) total += model.prob(x, y, z);
  }
  return total;
}

Rational y_given_xz(const RationalModel& model, std::size_t x, std::size_t y, std::size_t z) {
  Rational denom(0);
  for (std::size_t yy = 0; yy < model.shape().y; ++yy) denom += model.prob(x, yy, z);
  return model.prob(x, y, z) / denom;
}

void check_indices(const Shape& s, std::size_t x, std::size_t y, std::size_t z) {
  if (x >= s.x || y >= s.y || z >= s.z) {
    throw Error(ErrorCode::IndexOutOfRange,
                fmt::format("(x={}, y={}, z={}) outside shape {}x{}x{}", x, y, z, s.x, s.y, s.z));
  }
}

}  // namespace

Rational ratio(long num, unsigned long den) {
  Rational out(num, den);
  out.canonicalize();
  return out;
}

Rational parse_rational(std::string_view text) {
  const std::string_view body = trim(text);
  std::string_view digits = body;
  bool negative = false;
  if (!digits.empty() && (digits.front() == '-' || digits.front() == '+')) {
    negative = digits.front() == '-';
    digits.remove_prefix(1);
  }
  Rational out;
  if (const auto slash = digits.find('/'); slash != std::string_view::npos) {
    const auto num = trim(digits.substr(0, slash));
    const auto den = trim(digits.substr(slash + 1));
    if (!all_digits(num) || !all_digits(den)) not_rational(text);
    mpz_class d(std::string(den), 10);
    if (d == 0) not_rational(text);
    out = Rational(mpz_class(std::string(num), 10), d);
  } else if (const auto dot = digits.find('.'); dot != std::string_view::npos) {
    const auto whole = digits.substr(0, dot);
    const auto frac = digits.substr(dot + 1);
    if ((!whole.empty() && !all_digits(whole)) || (!frac.empty() && !all_digits(frac)) ||
        (whole.empty() && frac.empty())) {
      not_rational(text);
    }
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
    const std::string joined = std::string(whole.empty() ? "0" : whole) + std::string(frac);
    out = Rational(mpz_class(joined, 10), scale);
  } else {
    if (!all_digits(digits)) not_rational(text);
    out = Rational(mpz_class(std::string(digits), 10));
  }
  out.canonicalize();
  if (negative) out = -out;
  return out;
}

std::string to_string(const Rational& value) {
  return value.get_num().get_str() + "/" + value.get_den().get_str();
}

RationalModel::RationalModel(Shape shape, std::vector<Rational> probs)
    : shape_(shape), probs_(std::move(probs)) {
  if (shape.x == 0 || shape.y == 0 || shape.z == 0) {
    throw Error(ErrorCode::EmptyAxis, "rational model has an empty axis");
  }
  if (probs_.size() != shape.cells()) {
    throw Error(ErrorCode::InvalidArgument,
                fmt::format("table has {} entries, shape needs {}", probs_.size(), shape.cells()));
  }
  Rational total(0);
  for (std::size_t i = 0; i < probs_.size(); ++i) {
    if (probs_[i] <= 0) {
      throw Error(ErrorCode::NonPositiveEntry,
                  fmt::format("cell {} = {} is not positive", i, to_string(probs_[i])));
    }
    total += probs_[i];
  }
  if (total != 1) {
    throw Error(ErrorCode::NotNormalized, fmt::format("table sums to {}", to_string(total)));
  }
}

const Rational& RationalModel::prob(std::size_t x, std::size_t y, std::size_t z) const {
  check_indices(shape_, x, y, z);
  return probs_[shape_.offset(x, y, z)];
}

JointModel RationalModel::to_joint() const {
  std::vector<double> probs(probs_.size());
  std::transform(probs_.begin(), probs_.end(), probs.begin(),
                 [](const Rational& r) { return r.get_d(); });
  return validate_model(shape_, std::move(probs));
}

std::uint64_t dataset_count(const Shape& shape, std::size_t n) {
  const std::uint64_t k = shape.cells();
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (k != 0 && total > std::numeric_limits<std::uint64_t>::max() / k) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    total *= k;
  }
  return total;
}

std::vector<Rational> exact_interventional(const RationalModel& model, std::size_t x) {
  check_indices(model.shape(), x, 0, 0);
  std::vector<Rational> p(model.shape().y, Rational(0));
  for (std::size_t y = 0; y < p.size(); ++y) {
    for (std::size_t z = 0; z < model.shape().z; ++z) {
      p[y] += z_marginal(model, z) * y_given_xz(model, x, y, z);
    }
  }
  return p;
}

ExactReport exact_lemma1(const RationalModel& model, std::size_t x, std::size_t n,
                         const Rational& c, std::uint64_t budget) {
  const Shape& s = model.shape();
  check_indices(s, x, 0, 0);
  if (c <= 0) throw Error(ErrorCode::NonPositiveC, "regularization c must be > 0");

  const std::vector<Rational> p = exact_interventional(model, x);
  ExactReport report{x, n, c, 0, {}};
  std::vector<Rational> expectation(s.y, Rational(0));

  std::vector<std::size_t> n_z(s.z), n_xz(s.z), n_xyz(s.y * s.z);
  const Rational total_plus_c = Rational(static_cast<unsigned long>(n)) + c;
  report.datasets = for_each_dataset(
      model, n, budget, [&](const std::vector<std::size_t>& cells, const Rational& weight) {
        std::fill(n_z.begin(), n_z.end(), 0);
        std::fill(n_xz.begin(), n_xz.end(), 0);
        std::fill(n_xyz.begin(), n_xyz.end(), 0);
        for (const std::size_t cell : cells) {
          const auto obs = decode(s, cell);
          ++n_z[obs.z];
          if (obs.x == x) {
            ++n_xz[obs.z];
            ++n_xyz[obs.y * s.z + obs.z];
          }
        }
        for (std::size_t y = 0; y < s.y; ++y) {
          Rational F(0);
          for (std::size_t z = 0; z < s.z; ++z) {
            F += (Rational(static_cast<unsigned long>(n_z[z])) + c) / total_plus_c *
                 ((Rational(static_cast<unsigned long>(n_xyz[y * s.z + z])) + c) /
                  (Rational(static_cast<unsigned long>(n_xz[z])) + c));
          }
          expectation[y] += weight * p[y] / F;
        }
      });
  for (auto& value : expectation) report.per_y.push_back({std::move(value), Rational(1)});
  return report;
}

ExactConditionalReport exact_conditional_bounds(const RationalModel& model, std::size_t x,
                                                std::size_t y, std::size_t z, std::size_t n,
                                                std::uint64_t budget) {
  const Shape& s = model.shape();
  check_indices(s, x, y, z);
  ExactConditionalReport report{x, y, z, n, 0, {}, {}};
  Rational z_term(0), conditional_term(0);
  const Rational n_plus_one(static_cast<unsigned long>(n + 1));
  report.datasets = for_each_dataset(
      model, n, budget, [&](const std::vector<std::size_t>& cells, const Rational& weight) {
        unsigned long count_z = 0, count_xz = 0, count_xyz = 0;
        for (const std::size_t cell : cells) {
          const auto obs = decode(s, cell);
          if (obs.z != z) continue;
          ++count_z;
          if (obs.x != x) continue;
          ++count_xz;
          if (obs.y == y) ++count_xyz;
        }
        z_term += weight * n_plus_one / Rational(count_z + 1);
        conditional_term += weight * Rational(count_xz + 1) / Rational(count_xyz + 1);
      });
  report.z_bound = {z_term, 1 / z_marginal(model, z)};
  report.conditional_bound = {conditional_term, 1 / y_given_xz(model, x, y, z)};
  return report;
}

}  // namespace causal_econf
