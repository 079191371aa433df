#include "causal_econf/model.hpp"

#include <cmath>
#include <fmt/format.h>

#include "causal_econf/error.hpp"

namespace causal_econf {
namespace {

void check_index(std::size_t value, std::size_t size, const char* axis) {
  if (value >= size) {
    throw Error(ErrorCode::IndexOutOfRange,
                fmt::format("{} index {} out of range [0, {})", axis, value, size));
  }
}

double z_mass(const JointModel& model, std::size_t z) {
  double total = 0.0;
  for (std::size_t x = 0; x < model.x_size(); ++x) {
    for (std::size_t y = 0; y < model.y_size(); ++y) total += model.prob(x, y, z);
  }
  return total;
}

double xz_mass(const JointModel& model, std::size_t x, std::size_t z) {
  double total = 0.0;
  for (std::size_t y = 0; y < model.y_size(); ++y) total += model.prob(x, y, z);
  return total;
}

}  // namespace

double JointModel::prob(std::size_t x, std::size_t y, std::size_t z) const {
  check_index(x, shape_.x, "x");
  check_index(y, shape_.y, "y");
  check_index(z, shape_.z, "z");
  return probs_[shape_.offset(x, y, z)];
}

JointModel validate_model(Shape shape, std::vector<double> probs) {
  if (shape.x == 0 || shape.y == 0 || shape.z == 0) {
    throw Error(ErrorCode::EmptyAxis,
                fmt::format("shape {}x{}x{} has an empty axis", shape.x, shape.y, shape.z));
  }
  if (probs.size() != shape.cells()) {
    throw Error(ErrorCode::InvalidArgument,
                fmt::format("table has {} entries, shape {}x{}x{} needs {}", probs.size(),
                            shape.x, shape.y, shape.z, shape.cells()));
  }
  double total = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (!(probs[i] >= kPositivityFloor)) {
      throw Error(ErrorCode::NonPositiveEntry,
                  fmt::format("cell {} has probability {} < {}", i, probs[i], kPositivityFloor));
    }
    total += probs[i];
  }
  if (!(std::abs(total - 1.0) <= kNormalizationTolerance)) {
    throw Error(ErrorCode::NotNormalized, fmt::format("table sums to {:.17g}", total));
  }
  return JointModel(shape, std::move(probs));
}

std::vector<double> marginal_z(const JointModel& model) {
  std::vector<double> out(model.z_size());
  for (std::size_t z = 0; z < model.z_size(); ++z) out[z] = z_mass(model, z);
  return out;
}

std::vector<double> conditional_y_given_xz(const JointModel& model, std::size_t x,
                                           std::size_t z) {
  check_index(x, model.x_size(), "x");
  check_index(z, model.z_size(), "z");
  const double denom = xz_mass(model, x, z);
  std::vector<double> out(model.y_size());
  for (std::size_t y = 0; y < model.y_size(); ++y) out[y] = model.prob(x, y, z) / denom;
  return out;
}

double p_yz(const JointModel& model, std::size_t x, std::size_t y, std::size_t z) {
  check_index(x, model.x_size(), "x");
  check_index(y, model.y_size(), "y");
  check_index(z, model.z_size(), "z");
  return z_mass(model, z) * (model.prob(x, y, z) / xz_mass(model, x, z));
}

InterventionalDist interventional_py(const JointModel& model, std::size_t x) {
  check_index(x, model.x_size(), "x");
  InterventionalDist out{x, std::vector<double>(model.y_size(), 0.0)};
  for (std::size_t y = 0; y < model.y_size(); ++y) {
    double total = 0.0;
    for (std::size_t z = 0; z < model.z_size(); ++z) total += p_yz(model, x, y, z);
    out.p[y] = total;
  }
  return out;
}

}  // namespace causal_econf
