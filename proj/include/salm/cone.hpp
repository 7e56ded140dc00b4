#pragma once

#include <cstddef>
#include <vector>

#include "salm/types.hpp"

namespace salm {

/// Index split of the constraint vector into equality constraints (cone
/// factor {0}) and inequality constraints (cone factor (-inf, 0]).
///
/// Indices are zero-based. The partition covers every index exactly once and
/// both lists are kept sorted.
class ConePartition {
 public:
  ConePartition() = default;
  ConePartition(std::size_t n, std::vector<std::size_t> equality_set,
                std::vector<std::size_t> inequality_set);

  static ConePartition all_inequality(std::size_t n);
  static ConePartition all_equality(std::size_t n);

  std::size_t size() const { return n_; }
  const std::vector<std::size_t>& equality_set() const { return equality_; }
  const std::vector<std::size_t>& inequality_set() const { return inequality_; }
  bool is_inequality(std::size_t i) const;

  friend bool operator==(const ConePartition&, const ConePartition&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::size_t> equality_;
  std::vector<std::size_t> inequality_;
};

inline constexpr double kDefaultConeTolerance = 1e-10;

/// Euclidean projection onto K: zero on equality indices, min(0, y_i) on
/// inequality indices.
ConstraintVector project_onto_cone(const ConstraintVector& y, const ConePartition& p);

/// dist_K(y) = ||y - project_onto_cone(y)||_2.
double cone_distance(const ConstraintVector& y, const ConePartition& p);

/// Membership of v in the normal cone N_K(s), using the componentwise
/// characterization: s must lie in K, and on inequality indices v_i >= 0 with
/// v_i * s_i = 0. Equality components of v are unrestricted.
bool in_normal_cone(const ConstraintVector& v, const ConstraintVector& s, const ConePartition& p,
                    double tol = kDefaultConeTolerance);

/// Membership in the dual cone {y : y^T k >= 0 for all k in K}, i.e. y_i <= 0
/// on inequality indices.
bool in_dual_cone(const ConstraintVector& y, const ConePartition& p,
                  double tol = kDefaultConeTolerance);

}  // namespace salm
