#pragma once

#include <initializer_list>
#include <memory>

#include "salm/constraints.hpp"

namespace salm::testing {

inline Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

/// h(u) = A u + b with constant gradients given by the rows of A.
inline std::shared_ptr<FunctionConstraintSystem> affine_constraints(ConePartition p, Matrix a,
                                                                    Vector b) {
  return std::make_shared<FunctionConstraintSystem>(
      std::move(p), [a, b](const Point& u) { return ConstraintVector(a * u + b); },
      [a](const Point& u) {
        std::vector<TangentVector> g;
        for (Eigen::Index i = 0; i < a.rows(); ++i) g.push_back({u, a.row(i).transpose()});
        return g;
      });
}

}  // namespace salm::testing
