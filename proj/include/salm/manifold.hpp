#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "salm/types.hpp"

namespace salm {

/// Element of T_u M: chart components together with the base point they are
/// attached to.
struct TangentVector {
  Point base;
  Vector components;

  static TangentVector zero(const Point& base) {
    return {base, Vector::Zero(base.size())};
  }
};

/// Contract for a (finite-dimensional chart of a) Riemannian manifold.
///
/// Implementations are immutable after construction and all oracles are pure,
/// so one instance may be shared between threads. The low-level virtuals take
/// raw chart vectors; the free functions below add base-point checks.
class Manifold {
 public:
  virtual ~Manifold() = default;

  virtual std::string name() const = 0;
  virtual std::size_t dimension() const = 0;

  /// g_u(v, w).
  virtual double inner(const Point& u, const Vector& v, const Vector& w) const = 0;

  /// R_u(v). May throw StepRejected when the result leaves the admissible set.
  virtual Point retraction(const Point& u, const Vector& v) const = 0;

  /// Exponential map, when available in closed form.
  virtual std::optional<Point> exponential(const Point& /*u*/, const Vector& /*v*/) const {
    return std::nullopt;
  }

  virtual double distance(const Point& u, const Point& w) const = 0;

  /// Riesz representative of a differential: the v with g_u(v, w) = dF[w] for
  /// all w, where `differential` holds dF[e_i] in chart coordinates.
  virtual Vector riesz(const Point& u, const Vector& differential) const = 0;

  /// Throws DimensionError/DomainError when u is not a valid point.
  virtual void validate(const Point& u) const;
};

using ManifoldPtr = std::shared_ptr<const Manifold>;

/// R^d with the Euclidean metric and u + v as retraction and exponential map.
class EuclideanSpace final : public Manifold {
 public:
  explicit EuclideanSpace(std::size_t dim);

  std::string name() const override { return "euclidean"; }
  std::size_t dimension() const override { return dim_; }
  double inner(const Point& u, const Vector& v, const Vector& w) const override;
  Point retraction(const Point& u, const Vector& v) const override;
  std::optional<Point> exponential(const Point& u, const Vector& v) const override;
  double distance(const Point& u, const Point& w) const override;
  Vector riesz(const Point& u, const Vector& differential) const override;

 private:
  std::size_t dim_;
};

/// M_1 x ... x M_N with coordinates stacked factor by factor. The metric is
/// the sum of factor metrics and the distance the l2 combination of factor
/// distances.
class ProductManifold : public Manifold {
 public:
  explicit ProductManifold(std::vector<ManifoldPtr> factors);

  std::string name() const override;
  std::size_t dimension() const override { return offsets_.back(); }
  double inner(const Point& u, const Vector& v, const Vector& w) const override;
  Point retraction(const Point& u, const Vector& v) const override;
  std::optional<Point> exponential(const Point& u, const Vector& v) const override;
  double distance(const Point& u, const Point& w) const override;
  Vector riesz(const Point& u, const Vector& differential) const override;
  void validate(const Point& u) const override;

  std::size_t num_factors() const { return factors_.size(); }
  const Manifold& factor(std::size_t i) const { return *factors_.at(i); }
  std::size_t offset(std::size_t i) const { return offsets_.at(i); }
  std::size_t factor_dimension(std::size_t i) const { return offsets_.at(i + 1) - offsets_.at(i); }

  /// View of the coordinates that belong to factor i.
  Eigen::Ref<const Vector> block(const Vector& x, std::size_t i) const {
    return x.segment(static_cast<Eigen::Index>(offsets_[i]),
                     static_cast<Eigen::Index>(factor_dimension(i)));
  }

 private:
  std::vector<ManifoldPtr> factors_;
  std::vector<std::size_t> offsets_;
};

double metric_inner(const Manifold& m, const Point& u, const TangentVector& v,
                    const TangentVector& w);
double metric_norm(const Manifold& m, const Point& u, const TangentVector& v);
Point retract(const Manifold& m, const Point& u, const TangentVector& v);
double distance(const Manifold& m, const Point& u, const Point& w);

/// Gradient of a function at u from its chart differential.
TangentVector gradient_from_differential(const Manifold& m, const Point& u,
                                         const Vector& differential);

/// Throws DomainError unless v is attached to u.
void require_base(const Point& u, const TangentVector& v);

}  // namespace salm
