#include "salm/constraints.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "salm/errors.hpp"

namespace salm {

Box Box::uniform(std::size_t n, double lower, double upper) {
  Box b{Vector::Constant(static_cast<Eigen::Index>(n), lower),
        Vector::Constant(static_cast<Eigen::Index>(n), upper)};
  b.validate();
  return b;
}

void Box::validate() const {
  if (lower.size() != upper.size()) throw DimensionError("box bounds differ in length");
  for (Eigen::Index i = 0; i < lower.size(); ++i) {
    if (std::isnan(lower[i]) || std::isnan(upper[i]) || lower[i] > upper[i]) {
      throw ParameterError("box component " + std::to_string(i) + " has lower > upper");
    }
  }
}

bool Box::contains(const Vector& x) const {
  if (x.size() != lower.size()) return false;
  return ((x.array() >= lower.array()) && (x.array() <= upper.array())).all();
}

TangentVector lagrangian_gradient(const TangentVector& j_grad,
                                  const std::vector<TangentVector>& h_grad, const Vector& lambda) {
  if (static_cast<std::size_t>(lambda.size()) != h_grad.size()) {
    throw DimensionError("multiplier length does not match the number of constraints");
  }
  TangentVector out = j_grad;
  for (std::size_t i = 0; i < h_grad.size(); ++i) {
    require_base(j_grad.base, h_grad[i]);
    out.components += lambda[static_cast<Eigen::Index>(i)] * h_grad[i].components;
  }
  return out;
}

TangentVector lagrangian_gradient(const TangentVector& j_grad, const ConstraintSystem& c,
                                  const Point& u, const Vector& lambda) {
  require_base(u, j_grad);
  return lagrangian_gradient(j_grad, c.gradient(u), lambda);
}

Vector multiplier_update(const ConstraintVector& h_val, const Vector& w, double mu,
                         const ConePartition& p) {
  if (!(mu > 0.0)) throw ParameterError("penalty parameter must be positive");
  if (w.size() != h_val.size()) throw DimensionError("multiplier proxy length mismatch");
  const ConstraintVector v = h_val + w / mu;
  return mu * (v - project_onto_cone(v, p));
}

Vector multiplier_update(const ConstraintSystem& c, const Point& u_next,
                         const MultiplierState& state) {
  return multiplier_update(c.value(u_next), state.w, state.mu, c.partition());
}

Vector safeguard(const Vector& lambda, const Box& box) {
  box.validate();
  if (lambda.size() != box.lower.size()) throw DimensionError("box and multiplier lengths differ");
  return lambda.cwiseMax(box.lower).cwiseMin(box.upper);
}

}  // namespace salm
