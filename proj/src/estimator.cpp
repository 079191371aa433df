#include "causal_econf/estimator.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "causal_econf/error.hpp"

namespace causal_econf {
namespace {

void check_query(const CountTable& counts, std::size_t x, std::size_t y, Regularization reg) {
  const Shape& s = counts.shape();
  if (x >= s.x || y >= s.y) {
    throw Error(ErrorCode::IndexOutOfRange,
                fmt::format("query (x={}, y={}) outside shape {}x{}x{}", x, y, s.x, s.y, s.z));
  }
  if (!(reg.c > 0.0)) {
    throw Error(ErrorCode::NonPositiveC, fmt::format("regularization c={} must be > 0", reg.c));
  }
}

void check_z(const CountTable& counts, std::size_t z) {
  if (z >= counts.shape().z) {
    throw Error(ErrorCode::IndexOutOfRange,
                fmt::format("z={} outside z_size={}", z, counts.shape().z));
  }
}

double z_factor_unchecked(const CountTable& counts, std::size_t z, double c) {
  return (static_cast<double>(counts.n_z(z)) + c) / (static_cast<double>(counts.total()) + c);
}

double conditional_factor_unchecked(const CountTable& counts, std::size_t x, std::size_t y,
                                    std::size_t z, double c) {
  return (static_cast<double>(counts.n_xyz(x, y, z)) + c) /
         (static_cast<double>(counts.n_xz(x, z)) + c);
}

}  // namespace

CountTable::CountTable(Shape shape)
    : shape_(shape),
      n_z_(shape.z, 0),
      n_xz_(shape.x * shape.z, 0),
      n_xyz_(shape.cells(), 0) {
  if (shape.x == 0 || shape.y == 0 || shape.z == 0) {
    throw Error(ErrorCode::EmptyAxis, "count table needs non-empty axes");
  }
}

void CountTable::add(const Observation& row) {
  if (row.x >= shape_.x || row.y >= shape_.y || row.z >= shape_.z) {
    throw Error(ErrorCode::IndexOutOfRange,
                fmt::format("row ({},{},{}) outside shape {}x{}x{}", row.x, row.y, row.z,
                            shape_.x, shape_.y, shape_.z));
  }
  ++total_;
  ++n_z_[row.z];
  ++n_xz_[row.x * shape_.z + row.z];
  ++n_xyz_[shape_.offset(row.x, row.y, row.z)];
}

void CountTable::clear() noexcept {
  total_ = 0;
  std::fill(n_z_.begin(), n_z_.end(), 0);
  std::fill(n_xz_.begin(), n_xz_.end(), 0);
  std::fill(n_xyz_.begin(), n_xyz_.end(), 0);
}

CountTable fit_counts(const Dataset& data, const Shape& shape) {
  CountTable counts(shape);
  for (const auto& row : data.rows) counts.add(row);
  return counts;
}

double z_factor(const CountTable& counts, std::size_t z, Regularization reg) {
  check_query(counts, 0, 0, reg);
  check_z(counts, z);
  return z_factor_unchecked(counts, z, reg.c);
}

double conditional_factor(const CountTable& counts, std::size_t x, std::size_t y, std::size_t z,
                          Regularization reg) {
  check_query(counts, x, y, reg);
  check_z(counts, z);
  return conditional_factor_unchecked(counts, x, y, z, reg.c);
}

double estimate_F_z(const CountTable& counts, std::size_t x, std::size_t y, std::size_t z,
                    Regularization reg) {
  check_query(counts, x, y, reg);
  check_z(counts, z);
  return z_factor_unchecked(counts, z, reg.c) *
         conditional_factor_unchecked(counts, x, y, z, reg.c);
}

double estimate_F(const CountTable& counts, std::size_t x, std::size_t y, Regularization reg) {
  check_query(counts, x, y, reg);
  double total = 0.0;
  for (std::size_t z = 0; z < counts.shape().z; ++z) {
    total += z_factor_unchecked(counts, z, reg.c) *
             conditional_factor_unchecked(counts, x, y, z, reg.c);
  }
  return total;
}

std::vector<double> estimate_F_vector(const CountTable& counts, std::size_t x,
                                      Regularization reg) {
  std::vector<double> out(counts.shape().y);
  for (std::size_t y = 0; y < out.size(); ++y) out[y] = estimate_F(counts, x, y, reg);
  return out;
}

}  // namespace causal_econf
