#include "salm/stochastic.hpp"

#include <gtest/gtest.h>

#include <array>
#include <boost/math/distributions/chi_squared.hpp>
#include <numbers>

#include "helpers.hpp"
#include "salm/errors.hpp"
#include "salm/problems.hpp"

namespace salm {
namespace {

using testing::vec;

TEST(RngStream, ReproducibleAndPathDependent) {
  RngStream a(42, {3, 1, 7});
  RngStream b(42, {3, 1, 7});
  RngStream c(42, {3, 1, 8});
  RngStream d(43, {3, 1, 7});
  for (int i = 0; i < 100; ++i) {
    const auto x = a();
    EXPECT_EQ(x, b());
    EXPECT_NE(x, c());
    EXPECT_NE(x, d());
  }
  EXPECT_EQ(RngStream(42).at({3, 1, 7})(), RngStream(42, {3, 1, 7})());
  EXPECT_EQ(RngStream(42, {3, 1, 0}).substream(7)(), RngStream(42, {3, 1, 7})());
}

TEST(RngStream, UniformRange) {
  RngStream rng(1);
  double lo = 1, hi = 0, sum = 0;
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform();
    lo = std::min(lo, u);
    hi = std::max(hi, u);
    sum += u;
  }
  EXPECT_GE(lo, 0.0);
  EXPECT_LT(hi, 1.0);
  EXPECT_NEAR(sum / 100000, 0.5, 4 * std::sqrt(1.0 / 12 / 100000));
}

TEST(RngStream, AdjacentPathsUncorrelated) {
  RngStream a(7, {1, 2, 3});
  RngStream b(7, {1, 2, 4});
  const int n = 100000;
  double sab = 0, sa = 0, sb = 0, saa = 0, sbb = 0;
  for (int i = 0; i < n; ++i) {
    const double x = a.uniform(), y = b.uniform();
    sab += x * y;
    sa += x;
    sb += y;
    saa += x * x;
    sbb += y * y;
  }
  const double cov = sab / n - sa / n * sb / n;
  const double corr = cov / std::sqrt((saa / n - sa / n * sa / n) * (sbb / n - sb / n * sb / n));
  EXPECT_LT(std::abs(corr), 0.01);
}

TEST(KLField, Examples) {
  const KLField f;
  std::vector<double> zero(100, 0.0);
  EXPECT_DOUBLE_EQ(sample_kl(f, 0.5, zero), 1.0);
  EXPECT_EQ(sample_kl(f, 0.0, zero), 0.0);
  EXPECT_EQ(sample_kl(f, 1.0, zero), 0.0);
}

TEST(KLField, Errors) {
  const KLField f;
  std::vector<double> zero(100, 0.0);
  EXPECT_THROW(sample_kl(f, -0.1, zero), DomainError);
  EXPECT_THROW(sample_kl(f, 1.1, zero), DomainError);
  std::vector<double> big(100, 0.0);
  big[3] = 0.6;
  EXPECT_THROW(sample_kl(f, 0.3, big), DomainError);
  std::vector<double> short_xi(10, 0.0);
  EXPECT_THROW(sample_kl(f, 0.3, short_xi), DimensionError);
  EXPECT_THROW((KLField{0, 3.5}.validate()), ParameterError);
  EXPECT_THROW((KLField{10, 0.0}.validate()), ParameterError);
}

TEST(KLField, SeriesMatchesDirectSum) {
  const KLField f{5, 2.0};
  const std::vector<double> xi{0.1, -0.2, 0.3, -0.4, 0.5};
  const double x2 = 0.37;
  double expect = -4 * x2 * (x2 - 1);
  for (int l = 1; l <= 5; ++l) {
    expect += std::pow(l, -2.5) * std::sin(2 * std::numbers::pi * l * (x2 - 0.5)) * xi[l - 1];
  }
  EXPECT_NEAR(sample_kl(f, x2, xi), expect, 1e-15);
}

TEST(KLField, AnalyticVariance) {
  const KLField f;
  double sum = 0.0;
  for (int l = 1; l <= 100; ++l) {
    const double s = std::sin(2 * std::numbers::pi * l * (0.25 - 0.5));
    sum += std::pow(l, -8.0) * s * s;
  }
  EXPECT_NEAR(f.variance(0.25), sum / 12.0, 1e-15);
}

TEST(KLField, CoefficientsInRange) {
  const KLField f;
  RngStream rng(3);
  for (int t = 0; t < 100; ++t) {
    const Vector xi = draw_kl_coefficients(f, rng);
    ASSERT_EQ(xi.size(), 100);
    EXPECT_LE(xi.cwiseAbs().maxCoeff(), 0.5);
  }
}

// J(u, xi) = 1/2 ||u - c||^2 with gradient noise sigma xi.
TEST(BatchGradient, SingleDrawPassthrough) {
  const auto obj = shifted_quadratic_objective(vec({1, 2}), 0.5);
  const RngStream stream(9, {1, 1, 0});
  const Point u = vec({0.3, -0.1});
  RngStream first = stream.substream(1);
  const ObjectiveSample one = obj->sample(u, first);
  const ObjectiveSample mean = batch_gradient(*obj, u, 1, stream);
  EXPECT_EQ(mean.value, one.value);
  EXPECT_EQ(mean.gradient.components, one.gradient.components);
}

TEST(BatchGradient, ZeroVarianceIsExact) {
  const auto obj = shifted_quadratic_objective(vec({1, 2}), 0.0);
  const Point u = vec({0.3, -0.1});
  const ObjectiveSample mean = batch_gradient(*obj, u, 16, RngStream(1));
  EXPECT_LE((mean.gradient.components - (u - vec({1, 2}))).norm(), 1e-15);
}

TEST(BatchGradient, ZeroBatchThrows) {
  const auto obj = shifted_quadratic_objective(vec({1}), 0.1);
  EXPECT_THROW(batch_gradient(*obj, vec({0}), 0, RngStream(1)), ParameterError);
}

TEST(BatchGradient, Deterministic) {
  const auto obj = shifted_quadratic_objective(vec({1, 2}), 0.5);
  const Point u = vec({0.3, -0.1});
  EXPECT_EQ(batch_gradient(*obj, u, 10, RngStream(5, {2, 3, 0})).gradient.components,
            batch_gradient(*obj, u, 10, RngStream(5, {2, 3, 0})).gradient.components);
}

TEST(BatchGradient, VarianceScalesInverselyWithBatch) {
  const auto obj = shifted_quadratic_objective(vec({0}), 1.0);
  const Point u = vec({0.0});
  std::array<double, 3> var{};
  const std::array<int, 3> ms{1, 4, 16};
  for (int i = 0; i < 3; ++i) {
    double s = 0, sq = 0;
    const int reps = 10000;
    for (int r = 0; r < reps; ++r) {
      const double g = batch_gradient(*obj, u, ms[i], RngStream(17, {static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(r), 0}))
                           .gradient.components[0];
      s += g;
      sq += g * g;
    }
    var[i] = sq / reps - (s / reps) * (s / reps);
  }
  // Least-squares slope of log Var against log m.
  double mx = 0, my = 0;
  for (int i = 0; i < 3; ++i) {
    mx += std::log(ms[i]) / 3;
    my += std::log(var[i]) / 3;
  }
  double num = 0, den = 0;
  for (int i = 0; i < 3; ++i) {
    num += (std::log(ms[i]) - mx) * (std::log(var[i]) - my);
    den += std::pow(std::log(ms[i]) - mx, 2);
  }
  EXPECT_NEAR(num / den, -1.0, 0.1);
}

TEST(DrawStopping, Degenerate) {
  RngStream rng(4);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(draw_stopping(1, rng), 1);
  EXPECT_THROW(draw_stopping(0, rng), ParameterError);
}

TEST(DrawStopping, ReproducibleAndInRange) {
  RngStream a(10, {4, 0, 0}), b(10, {4, 0, 0});
  for (int i = 0; i < 1000; ++i) {
    const auto r = draw_stopping(13, a);
    EXPECT_EQ(r, draw_stopping(13, b));
    EXPECT_GE(r, 1);
    EXPECT_LE(r, 13);
  }
}

TEST(DrawStopping, ChiSquareUniform) {
  RngStream rng(2024);
  std::array<int, 7> counts{};
  const int n = 100000;
  for (int i = 0; i < n; ++i) ++counts[static_cast<std::size_t>(draw_stopping(7, rng) - 1)];
  double chi2 = 0;
  for (int c : counts) chi2 += std::pow(c - n / 7.0, 2) / (n / 7.0);
  const double p = boost::math::cdf(boost::math::complement(boost::math::chi_squared(6), chi2));
  EXPECT_GT(p, 0.01);
}

TEST(Unbiasedness, ShippedObjectives) {
  const auto quad = quadratic_benchmark(3, 0.7);
  MultiShapeOptions o;
  o.num_curves = 2;
  o.nodes_per_curve = 16;
  o.kl.num_terms = 20;
  o.perturbation_amplitude = 0.3;
  const auto shape = multishape_benchmark(o);
  for (const ProblemDefinition* p : {&quad, &shape}) {
    RngStream pts(55);
    for (int t = 0; t < 10; ++t) {
      Vector d(static_cast<Eigen::Index>(p->manifold->dimension()));
      for (auto& x : d) x = (p->name == "quadratic" ? 1.0 : 0.005) * pts.normal();
      const Point u = p->manifold->retraction(p->initial_point, d);
      const Vector exact = p->objective->expectation(u)->gradient.components;
      const int n = 100000;
      Vector sum = Vector::Zero(u.size()), sq = Vector::Zero(u.size());
      RngStream rng(1000 + static_cast<std::uint64_t>(t));
      for (int i = 0; i < n; ++i) {
        const Vector g = p->objective->sample(u, rng).gradient.components;
        sum += g;
        sq += g.cwiseProduct(g);
      }
      const Vector mean = sum / n;
      const Vector sd = (sq / n - mean.cwiseProduct(mean)).cwiseMax(0.0).cwiseSqrt();
      EXPECT_LE((mean - exact).norm(), 4.0 * sd.norm() / std::sqrt(double(n)) + 1e-12)
          << p->name << " point " << t;
    }
  }
}

TEST(VarianceBound, QuadraticNoiseLevel) {
  const auto obj = shifted_quadratic_objective(vec({0, 0, 0}), 0.5);
  EuclideanSpace r3(3);
  const std::vector<Point> pts{vec({0, 0, 0}), vec({1, 2, 3})};
  const double m2 = estimate_variance_bound(r3, *obj, pts, 20000, RngStream(3));
  EXPECT_NEAR(m2, 3 * 0.25, 0.05);
}

}  // namespace
}  // namespace salm
