#pragma once

#include <Eigen/Core>

namespace salm {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Chart coordinates of a point on a manifold instance.
using Point = Eigen::VectorXd;

/// Values h(u) of the constraint map, one entry per constraint.
using ConstraintVector = Eigen::VectorXd;

}  // namespace salm
