#pragma once

#include <functional>
#include <optional>
#include <string>

#include "salm/constraints.hpp"
#include "salm/inner_rsg.hpp"
#include "salm/stochastic.hpp"

namespace salm {

/// A KKT pair known in closed form.
struct KnownSolution {
  Point u;
  Vector lambda;
};

/// min E[J(u, xi)] over u in M subject to h(u) in K.
struct ProblemDefinition {
  std::string name;
  ManifoldPtr manifold;
  StochasticObjectivePtr objective;
  ConstraintSystemPtr constraints;
  Point initial_point;
  std::optional<KnownSolution> known_solution;
  /// Lipschitz constant of grad L_A(., w; mu) as a function of mu, when the
  /// problem can provide one.
  std::function<double(double)> lipschitz;
  StepTransform step_transform;

  /// Throws when the parts are missing or disagree in dimension.
  void validate() const;
};

}  // namespace salm
