#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "causal_econf/model.hpp"
#include "causal_econf/sampling.hpp"

namespace causal_econf {

/// Sufficient statistics of a dataset for the interventional estimator.
class CountTable {
 public:
  explicit CountTable(Shape shape);

  const Shape& shape() const noexcept { return shape_; }
  std::uint64_t total() const noexcept { return total_; }
  std::uint64_t n_z(std::size_t z) const { return n_z_.at(z); }
  std::uint64_t n_xz(std::size_t x, std::size_t z) const { return n_xz_.at(x * shape_.z + z); }
  std::uint64_t n_xyz(std::size_t x, std::size_t y, std::size_t z) const {
    return n_xyz_.at(shape_.offset(x, y, z));
  }

  void add(const Observation& row);
  void clear() noexcept;

 private:
  Shape shape_;
  std::uint64_t total_ = 0;
  std::vector<std::uint64_t> n_z_;
  std::vector<std::uint64_t> n_xz_;
  std::vector<std::uint64_t> n_xyz_;
};

/// Additive smoothing constant replacing every "+1" of the estimator.
struct Regularization {
  double c = 1.0;
};

CountTable fit_counts(const Dataset& data, const Shape& shape);

/// (n_z + c) / (N + c).
double z_factor(const CountTable& counts, std::size_t z, Regularization reg);

/// (n_xyz + c) / (n_xz + c).
double conditional_factor(const CountTable& counts, std::size_t x, std::size_t y, std::size_t z,
                          Regularization reg);

/// z_factor * conditional_factor: the single-z summand of estimate_F.
double estimate_F_z(const CountTable& counts, std::size_t x, std::size_t y, std::size_t z,
                    Regularization reg);

/// F_y = sum over ascending z of estimate_F_z, without compensation.
double estimate_F(const CountTable& counts, std::size_t x, std::size_t y, Regularization reg);

std::vector<double> estimate_F_vector(const CountTable& counts, std::size_t x,
                                      Regularization reg);

}  // namespace causal_econf
