#include "causal_econf/model.hpp"

#include <cmath>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "causal_econf/error.hpp"
#include "test_support.hpp"

namespace causal_econf {
namespace {

JointModel uniform222() { return validate_model({2, 2, 2}, std::vector<double>(8, 0.125)); }
JointModel m1() { return testing::fixture_m1().to_joint(); }

using testing::code_of;

TEST(ValidateModel, UniformIsValid) {
  const auto model = uniform222();
  EXPECT_EQ(model.shape(), (Shape{2, 2, 2}));
  EXPECT_EQ(model.prob(1, 0, 1), 0.125);
}

TEST(ValidateModel, RejectsZeroCell) {
  std::vector<double> probs(8, 1.0 / 7.0);
  probs[3] = 0.0;
  EXPECT_EQ(code_of([&] { validate_model({2, 2, 2}, probs); }), ErrorCode::NonPositiveEntry);
}

TEST(ValidateModel, RejectsUnnormalized) {
  EXPECT_EQ(code_of([] { validate_model({2, 2, 2}, std::vector<double>(8, 0.25)); }),
            ErrorCode::NotNormalized);
}

TEST(ValidateModel, RejectsEmptyAxis) {
  EXPECT_EQ(code_of([] { validate_model({2, 0, 2}, {}); }), ErrorCode::EmptyAxis);
}

TEST(ValidateModel, DoesNotRenormalize) {
  // 1e-10 off is inside tolerance and is kept as given.
  std::vector<double> probs(8, 0.125);
  probs[0] += 1e-10;
  const auto model = validate_model({2, 2, 2}, probs);
  EXPECT_EQ(model.prob(0, 0, 0), 0.125 + 1e-10);
}

TEST(FixtureM1, MaterializesFromFactors) {
  const auto exact = testing::fixture_m1();
  const std::vector<Rational> expected = {Rational(1, 16), Rational(3, 16), Rational(1, 16),
                                          Rational(3, 16), Rational(1, 10), Rational(3, 40),
                                          Rational(1, 40), Rational(3, 10)};
  EXPECT_EQ(exact.table(), expected);
  EXPECT_NO_THROW(exact.to_joint());
}

TEST(MarginalZ, Examples) {
  EXPECT_EQ(marginal_z(uniform222()), (std::vector<double>{0.5, 0.5}));
  const auto mz = marginal_z(m1());
  EXPECT_NEAR(mz[0], 0.25, 1e-15);
  EXPECT_NEAR(mz[1], 0.75, 1e-15);
  const auto single = validate_model({2, 2, 1}, std::vector<double>(4, 0.25));
  EXPECT_EQ(marginal_z(single), std::vector<double>{1.0});
}

TEST(ConditionalYGivenXZ, Examples) {
  EXPECT_EQ(conditional_y_given_xz(uniform222(), 1, 0), (std::vector<double>{0.5, 0.5}));
  const auto c = conditional_y_given_xz(m1(), 1, 0);
  EXPECT_NEAR(c[0], 0.8, 1e-15);
  EXPECT_NEAR(c[1], 0.2, 1e-15);
  const auto single = validate_model({2, 1, 2}, std::vector<double>(4, 0.25));
  EXPECT_EQ(conditional_y_given_xz(single, 0, 1), std::vector<double>{1.0});
  EXPECT_THROW(conditional_y_given_xz(m1(), 2, 0), Error);
}

TEST(InterventionalPy, Examples) {
  const auto u = interventional_py(uniform222(), 0);
  EXPECT_EQ(u.p, (std::vector<double>{0.5, 0.5}));
  const auto p = interventional_py(m1(), 1);
  EXPECT_NEAR(p.p[1], 0.65, 1e-15);
  EXPECT_NEAR(p.p[0], 0.35, 1e-15);
  EXPECT_EQ(code_of([] { interventional_py(m1(), 5); }), ErrorCode::IndexOutOfRange);
}

TEST(InterventionalPy, NoConfoundingReducesToObservationalConditional) {
  // P(z) P(x) P(y|x): Y is independent of Z given X.
  const double pz[3] = {0.2, 0.5, 0.3};
  const double px[2] = {0.4, 0.6};
  const double py_given_x[2][2] = {{0.9, 0.1}, {0.3, 0.7}};
  std::vector<double> probs;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int z = 0; z < 3; ++z) probs.push_back(pz[z] * px[x] * py_given_x[x][y]);
  const auto model = validate_model({2, 2, 3}, probs);
  for (std::size_t x = 0; x < 2; ++x) {
    // observational P(Y=y | X=x) summed without any Z weighting
    double px_total = 0.0;
    for (std::size_t y = 0; y < 2; ++y)
      for (std::size_t z = 0; z < 3; ++z) px_total += model.prob(x, y, z);
    const auto p = interventional_py(model, x);
    for (std::size_t y = 0; y < 2; ++y) {
      double joint = 0.0;
      for (std::size_t z = 0; z < 3; ++z) joint += model.prob(x, y, z);
      EXPECT_NEAR(p.p[y], joint / px_total, 1e-14);
    }
  }
}

TEST(PYZ, Examples) {
  for (std::size_t x = 0; x < 2; ++x)
    for (std::size_t y = 0; y < 2; ++y)
      for (std::size_t z = 0; z < 2; ++z) EXPECT_DOUBLE_EQ(p_yz(uniform222(), x, y, z), 0.25);
  EXPECT_NEAR(p_yz(m1(), 1, 1, 1), 0.6, 1e-15);
  EXPECT_NEAR(p_yz(m1(), 1, 1, 0) + p_yz(m1(), 1, 1, 1), 0.65, 1e-15);
}

// Property checks over random positive tables.
TEST(ModelProperties, RandomTables) {
  std::mt19937_64 gen(20240611);
  std::uniform_int_distribution<std::size_t> size(1, 4);
  for (int iter = 0; iter < 500; ++iter) {
    const Shape shape{size(gen), size(gen), size(gen)};
    const auto model = testing::random_model(shape, gen);
    const auto mz = marginal_z(model);
    EXPECT_NEAR(std::accumulate(mz.begin(), mz.end(), 0.0), 1.0, 1e-9);
    for (std::size_t x = 0; x < shape.x; ++x) {
      const auto p = interventional_py(model, x);
      EXPECT_NEAR(std::accumulate(p.p.begin(), p.p.end(), 0.0), 1.0, 1e-9);
      for (std::size_t y = 0; y < shape.y; ++y) {
        double sum = 0.0;
        for (std::size_t z = 0; z < shape.z; ++z) sum += p_yz(model, x, y, z);
        EXPECT_EQ(sum, p.p[y]);  // same arithmetic path
      }
      for (std::size_t z = 0; z < shape.z; ++z) {
        // marginal and conditional recompose the table: P(x,y,z) = P(x,z) P(y|x,z)
        const auto cond = conditional_y_given_xz(model, x, z);
        double pxz = 0.0;
        for (std::size_t y = 0; y < shape.y; ++y) pxz += model.prob(x, y, z);
        for (std::size_t y = 0; y < shape.y; ++y) {
          EXPECT_NEAR(pxz * cond[y], model.prob(x, y, z), 1e-15);
        }
      }
    }
  }
}

}  // namespace
}  // namespace causal_econf
