#include "salm/auglag.hpp"

#include <cmath>

#include "salm/errors.hpp"

namespace salm {

namespace {

void require_positive_penalty(double mu) {
  if (!(mu > 0.0) || !std::isfinite(mu)) throw ParameterError("penalty parameter must be positive");
}

}  // namespace

double auglag_value(double j_val, const ConstraintVector& h_val, const Vector& lambda, double mu,
                    const ConePartition& p) {
  require_positive_penalty(mu);
  if (lambda.size() != h_val.size()) throw DimensionError("multiplier length mismatch");
  const double d = cone_distance(h_val + lambda / mu, p);
  return j_val + 0.5 * mu * d * d - lambda.squaredNorm() / (2.0 * mu);
}

double stochastic_auglag_value(double j_sample, const ConstraintVector& h_val,
                               const Vector& lambda, double mu, const ConePartition& p) {
  return auglag_value(j_sample, h_val, lambda, mu, p);
}

TangentVector auglag_penalty_gradient(const ConstraintVector& h_val,
                                      const std::vector<TangentVector>& h_grad,
                                      const Vector& w, double mu, const ConePartition& p) {
  require_positive_penalty(mu);
  if (static_cast<std::size_t>(h_val.size()) != h_grad.size() || h_grad.empty()) {
    throw DimensionError("constraint values and gradients disagree in count");
  }
  if (w.size() != h_val.size()) throw DimensionError("multiplier proxy length mismatch");
  const ConstraintVector v = h_val + w / mu;
  const ConstraintVector residual = v - project_onto_cone(v, p);
  TangentVector out = TangentVector::zero(h_grad.front().base);
  for (std::size_t i = 0; i < h_grad.size(); ++i) {
    require_base(out.base, h_grad[i]);
    out.components += (mu * residual[static_cast<Eigen::Index>(i)]) * h_grad[i].components;
  }
  return out;
}

TangentVector auglag_gradient(const TangentVector& j_grad, const ConstraintSystem& c,
                              const Point& u, const Vector& w, double mu) {
  require_base(u, j_grad);
  TangentVector out = j_grad;
  if (c.size() == 0) return out;
  out.components +=
      auglag_penalty_gradient(c.value(u), c.gradient(u), w, mu, c.partition()).components;
  return out;
}

double feasibility_measure(const ConstraintVector& h_val, const Vector& w, double mu,
                           const ConePartition& p) {
  require_positive_penalty(mu);
  if (w.size() != h_val.size()) throw DimensionError("multiplier proxy length mismatch");
  return (h_val - project_onto_cone(h_val + w / mu, p)).norm();
}

double feasibility_H(const ConstraintSystem& c, const Point& u, const Vector& w, double mu) {
  return feasibility_measure(c.value(u), w, mu, c.partition());
}

double optimality_r(const Manifold& m, const TangentVector& j_grad, const ConstraintSystem& c,
                    const Point& u, const Vector& lambda) {
  const TangentVector grad_l = lagrangian_gradient(j_grad, c, u, lambda);
  const ConstraintVector h = c.value(u);
  if (lambda.size() != h.size()) throw DimensionError("multiplier length mismatch");
  return metric_norm(m, u, grad_l) + (h - project_onto_cone(h + lambda, c.partition())).norm();
}

}  // namespace salm
