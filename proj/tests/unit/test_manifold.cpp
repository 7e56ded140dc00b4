#include "salm/manifold.hpp"

#include <gtest/gtest.h>

#include "salm/errors.hpp"
#include "salm/stochastic.hpp"

namespace salm {
namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

ProductManifold two_lines() {
  return ProductManifold({std::make_shared<EuclideanSpace>(1), std::make_shared<EuclideanSpace>(1)});
}

TEST(MetricInner, Euclidean) {
  EuclideanSpace r2(2);
  const Point u = vec({4, -1});
  EXPECT_EQ(metric_inner(r2, u, {u, vec({1, 0})}, {u, vec({0, 1})}), 0.0);
  EXPECT_EQ(metric_inner(r2, u, {u, vec({3, 4})}, {u, vec({3, 4})}), 25.0);
}

TEST(MetricInner, ProductSumsFactors) {
  const ProductManifold m = two_lines();
  const Point u = vec({0, 0});
  EXPECT_EQ(metric_inner(m, u, {u, vec({1, 2})}, {u, vec({1, 2})}), 5.0);
}

TEST(MetricInner, BaseMismatchThrows) {
  EuclideanSpace r2(2);
  EXPECT_THROW(metric_inner(r2, vec({0, 0}), {vec({1, 0}), vec({1, 0})}, {vec({0, 0}), vec({1, 0})}),
               DomainError);
  EXPECT_THROW(metric_inner(r2, vec({0, 0, 0}), {vec({0, 0, 0}), vec({1, 0, 0})},
                            {vec({0, 0, 0}), vec({1, 0, 0})}),
               DimensionError);
}

TEST(Retract, Additive) {
  EuclideanSpace r2(2);
  const Point u = vec({1, 2});
  EXPECT_EQ(retract(r2, u, {u, vec({0, 0})}), u);
  EXPECT_EQ(retract(r2, u, {u, vec({0.5, -1})}), vec({1.5, 1}));
  const ProductManifold m = two_lines();
  const Point p = vec({0, 1});
  EXPECT_EQ(retract(m, p, {p, vec({1, -1})}), vec({1, 0}));
}

TEST(Distance, Examples) {
  EuclideanSpace r2(2);
  EXPECT_EQ(distance(r2, vec({7, 7}), vec({7, 7})), 0.0);
  EXPECT_EQ(distance(r2, vec({0, 0}), vec({3, 4})), 5.0);
  EXPECT_EQ(distance(two_lines(), vec({0, 0}), vec({3, 4})), 5.0);
}

TEST(Distance, Symmetric) {
  EuclideanSpace r3(3);
  RngStream rng(5);
  for (int t = 0; t < 100; ++t) {
    Vector a(3), b(3);
    for (auto& x : a) x = rng.normal();
    for (auto& x : b) x = rng.normal();
    EXPECT_EQ(distance(r3, a, b), distance(r3, b, a));
  }
}

TEST(Manifold, MetricPositiveDefinite) {
  const ProductManifold m({std::make_shared<EuclideanSpace>(2), std::make_shared<EuclideanSpace>(3)});
  RngStream rng(11);
  const Point u = Point::Zero(5);
  for (int t = 0; t < 1000; ++t) {
    Vector v(5);
    for (auto& x : v) x = rng.normal();
    EXPECT_GT(metric_inner(m, u, {u, v}, {u, v}), 0.0);
  }
}

TEST(Manifold, ProductDecomposition) {
  const ProductManifold m({std::make_shared<EuclideanSpace>(2), std::make_shared<EuclideanSpace>(3)});
  RngStream rng(12);
  Vector u(5), v(5), w(5);
  for (auto& x : u) x = rng.normal();
  for (auto& x : v) x = rng.normal();
  for (auto& x : w) x = rng.normal();
  double sum = 0.0;
  for (std::size_t i = 0; i < m.num_factors(); ++i) {
    sum += m.factor(i).inner(Vector(m.block(u, i)), Vector(m.block(v, i)), Vector(m.block(w, i)));
  }
  EXPECT_EQ(m.inner(u, v, w), sum);
  EXPECT_EQ(m.factor_dimension(1), 3u);
  EXPECT_EQ(m.offset(1), 2u);
}

TEST(Manifold, RetractionFirstOrder) {
  EuclideanSpace r3(3);
  const Point u = vec({0.3, -2, 1});
  const Vector v = vec({1, 2, -0.5});
  for (double t : {1e-2, 1e-3}) {
    const double ratio = distance(r3, retract(r3, u, {u, t * v}), u) / t;
    EXPECT_NEAR(ratio, v.norm(), 1e-3);
  }
}

TEST(Manifold, ExponentialOptional) {
  EuclideanSpace r2(2);
  const auto e = r2.exponential(vec({1, 1}), vec({1, -1}));
  ASSERT_TRUE(e.has_value());
  EXPECT_EQ(*e, vec({2, 0}));
}

TEST(Manifold, GradientFromDifferentialIsIdentityOnEuclidean) {
  EuclideanSpace r2(2);
  const TangentVector g = gradient_from_differential(r2, vec({1, 1}), vec({3, -2}));
  EXPECT_EQ(g.components, vec({3, -2}));
}

TEST(Manifold, ValidateRejectsWrongDimensionAndNonFinite) {
  EuclideanSpace r2(2);
  EXPECT_THROW(r2.validate(vec({1, 2, 3})), DimensionError);
  EXPECT_THROW(r2.validate(vec({1, std::nan("")})), DomainError);
}

}  // namespace
}  // namespace salm
