#pragma once

#include "salm/constraints.hpp"

namespace salm {

/// Value and Riemannian gradient of the augmented Lagrangian at one point.
struct AugLagEvaluation {
  double value = 0.0;
  TangentVector gradient;
};

/// L_A = j + (mu/2) dist_K(h + lambda/mu)^2 - ||lambda||^2 / (2 mu).
double auglag_value(double j_val, const ConstraintVector& h_val, const Vector& lambda, double mu,
                    const ConePartition& p);

/// Per-sample variant with J(u, xi) in place of j(u). The formula is the same.
double stochastic_auglag_value(double j_sample, const ConstraintVector& h_val,
                               const Vector& lambda, double mu, const ConePartition& p);

/// grad j(u) + mu grad h(u)^T (h(u) + w/mu - pi_K(h(u) + w/mu)).
TangentVector auglag_gradient(const TangentVector& j_grad, const ConstraintSystem& c,
                              const Point& u, const Vector& w, double mu);

/// Penalty part only, from precomputed constraint values and gradients.
TangentVector auglag_penalty_gradient(const ConstraintVector& h_val,
                                      const std::vector<TangentVector>& h_grad,
                                      const Vector& w, double mu, const ConePartition& p);

/// ||h - pi_K(h + w/mu)||_2.
double feasibility_measure(const ConstraintVector& h_val, const Vector& w, double mu,
                           const ConePartition& p);

/// H(u, w; mu), evaluated through the constraint oracle.
double feasibility_H(const ConstraintSystem& c, const Point& u, const Vector& w, double mu);

/// r(u, lambda) = ||grad_u L(u, lambda)||_G + ||h(u) - pi_K(h(u) + lambda)||_2.
double optimality_r(const Manifold& m, const TangentVector& j_grad, const ConstraintSystem& c,
                    const Point& u, const Vector& lambda);

}  // namespace salm
