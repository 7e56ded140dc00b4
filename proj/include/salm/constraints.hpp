#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "salm/cone.hpp"
#include "salm/manifold.hpp"

namespace salm {

/// Deterministic constraint map h: M -> R^n together with its cone K.
/// Oracles must be pure.
class ConstraintSystem {
 public:
  virtual ~ConstraintSystem() = default;

  virtual const ConePartition& partition() const = 0;
  virtual ConstraintVector value(const Point& u) const = 0;
  /// Riemannian gradients grad h_1(u), ..., grad h_n(u), all based at u.
  virtual std::vector<TangentVector> gradient(const Point& u) const = 0;

  std::size_t size() const { return partition().size(); }
};

using ConstraintSystemPtr = std::shared_ptr<const ConstraintSystem>;

/// Constraint system assembled from callables; convenient for small problems
/// and tests.
class FunctionConstraintSystem final : public ConstraintSystem {
 public:
  using ValueFn = std::function<ConstraintVector(const Point&)>;
  using GradientFn = std::function<std::vector<TangentVector>(const Point&)>;

  FunctionConstraintSystem(ConePartition partition, ValueFn value, GradientFn gradient)
      : partition_(std::move(partition)), value_(std::move(value)), gradient_(std::move(gradient)) {}

  const ConePartition& partition() const override { return partition_; }
  ConstraintVector value(const Point& u) const override { return value_(u); }
  std::vector<TangentVector> gradient(const Point& u) const override { return gradient_(u); }

 private:
  ConePartition partition_;
  ValueFn value_;
  GradientFn gradient_;
};

/// Componentwise interval [lower, upper] used to safeguard multipliers.
struct Box {
  Vector lower;
  Vector upper;

  static Box uniform(std::size_t n, double lower, double upper);
  void validate() const;
  bool contains(const Vector& x) const;
};

/// (lambda, w, mu): current multiplier, its safeguarded proxy in B and the
/// penalty parameter.
struct MultiplierState {
  Vector lambda;
  Vector w;
  double mu = 1.0;
};

/// grad j(u) + sum_i lambda_i grad h_i(u).
TangentVector lagrangian_gradient(const TangentVector& j_grad, const ConstraintSystem& c,
                                  const Point& u, const Vector& lambda);

/// Same, with the constraint gradients at u already evaluated.
TangentVector lagrangian_gradient(const TangentVector& j_grad,
                                  const std::vector<TangentVector>& h_grad, const Vector& lambda);

/// mu * (v - pi_K(v)) with v = h + w / mu.
Vector multiplier_update(const ConstraintVector& h_val, const Vector& w, double mu,
                         const ConePartition& p);

/// Multiplier update evaluated at u_next with the proxy and penalty of `state`.
Vector multiplier_update(const ConstraintSystem& c, const Point& u_next,
                         const MultiplierState& state);

/// Componentwise clamp of lambda into the box.
Vector safeguard(const Vector& lambda, const Box& box);

}  // namespace salm
