#include "salm/constraints.hpp"

#include <gtest/gtest.h>

#include "helpers.hpp"
#include "salm/errors.hpp"
#include "salm/stochastic.hpp"

namespace salm {
namespace {

using testing::affine_constraints;
using testing::vec;

TEST(LagrangianGradient, OneDimensional) {
  const auto c = affine_constraints(ConePartition::all_inequality(1), Matrix::Ones(1, 1), vec({0}));
  const Point u = vec({0.3});
  EXPECT_EQ(lagrangian_gradient({u, vec({2})}, *c, u, vec({2})).components, vec({4}));
  EXPECT_EQ(lagrangian_gradient({u, vec({2})}, *c, u, vec({0})).components, vec({2}));
}

TEST(LagrangianGradient, LinearCombination) {
  Matrix a(2, 2);
  a << 0, 1, 1, 1;
  const auto c = affine_constraints(ConePartition::all_inequality(2), a, vec({0, 0}));
  const Point u = vec({0, 0});
  EXPECT_EQ(lagrangian_gradient({u, vec({1, 0})}, *c, u, vec({2, -1})).components, vec({0, 1}));
}

TEST(LagrangianGradient, DimensionMismatchThrows) {
  const auto c = affine_constraints(ConePartition::all_inequality(1), Matrix::Ones(1, 1), vec({0}));
  const Point u = vec({0.3});
  EXPECT_THROW(lagrangian_gradient({u, vec({2})}, *c, u, vec({1, 2})), DimensionError);
}

TEST(MultiplierUpdate, Examples) {
  const ConePartition ineq = ConePartition::all_inequality(1);
  EXPECT_DOUBLE_EQ(multiplier_update(vec({0.1}), vec({2}), 10, ineq)[0], 3.0);
  EXPECT_DOUBLE_EQ(multiplier_update(vec({-0.5}), vec({2}), 10, ineq)[0], 0.0);
  EXPECT_DOUBLE_EQ(multiplier_update(vec({0.2}), vec({-1}), 10, ConePartition::all_equality(1))[0],
                   1.0);
}

TEST(MultiplierUpdate, ThroughConstraintSystem) {
  const auto c = affine_constraints(ConePartition::all_inequality(1), -Matrix::Ones(1, 1), vec({1}));
  const MultiplierState state{vec({0}), vec({2}), 10};
  EXPECT_DOUBLE_EQ(multiplier_update(*c, vec({0.9}), state)[0], 3.0);
}

TEST(MultiplierUpdate, RejectsNonpositivePenalty) {
  EXPECT_THROW(multiplier_update(vec({0.1}), vec({2}), 0.0, ConePartition::all_inequality(1)),
               ParameterError);
}

TEST(MultiplierUpdate, SignAndNormalCone) {
  const ConePartition p(5, {0, 3}, {1, 2, 4});
  RngStream rng(77);
  for (int t = 0; t < 1000; ++t) {
    Vector h(5), w(5);
    for (auto& x : h) x = rng.normal();
    for (auto& x : w) x = 5.0 * rng.normal();
    const double mu = 0.1 + 100.0 * rng.uniform();
    const Vector lambda = multiplier_update(h, w, mu, p);
    for (std::size_t i : p.inequality_set()) EXPECT_GE(lambda[static_cast<Eigen::Index>(i)], 0.0);
    const Vector v = h + w / mu;
    EXPECT_TRUE(in_normal_cone(lambda, project_onto_cone(v, p), p, 1e-12));
  }
}

TEST(Safeguard, Examples) {
  EXPECT_EQ(safeguard(vec({50}), Box::uniform(1, -100, 100)), vec({50}));
  EXPECT_EQ(safeguard(vec({250}), Box::uniform(1, -100, 100)), vec({100}));
  EXPECT_EQ(safeguard(vec({-101, 3}), Box::uniform(2, -100, 100)), vec({-100, 3}));
}

TEST(Safeguard, MalformedBoxThrows) {
  EXPECT_THROW(safeguard(vec({0}), Box{vec({1}), vec({0})}), ParameterError);
  EXPECT_THROW(safeguard(vec({0, 1}), Box::uniform(1, -1, 1)), DimensionError);
}

TEST(Box, Contains) {
  const Box b = Box::uniform(2, -1, 1);
  EXPECT_TRUE(b.contains(vec({0, 1})));
  EXPECT_FALSE(b.contains(vec({0, 1.5})));
}

}  // namespace
}  // namespace salm
