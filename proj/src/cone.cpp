#include "salm/cone.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "salm/errors.hpp"

namespace salm {

namespace {

void check_length(const ConstraintVector& y, const ConePartition& p) {
  if (static_cast<std::size_t>(y.size()) != p.size()) {
    throw DimensionError("constraint vector has length " + std::to_string(y.size()) +
                         ", cone has " + std::to_string(p.size()) + " components");
  }
}

}  // namespace

ConePartition::ConePartition(std::size_t n, std::vector<std::size_t> equality_set,
                             std::vector<std::size_t> inequality_set)
    : n_(n), equality_(std::move(equality_set)), inequality_(std::move(inequality_set)) {
  std::sort(equality_.begin(), equality_.end());
  std::sort(inequality_.begin(), inequality_.end());
  if (std::adjacent_find(equality_.begin(), equality_.end()) != equality_.end() ||
      std::adjacent_find(inequality_.begin(), inequality_.end()) != inequality_.end()) {
    throw DimensionError("cone partition contains duplicate indices");
  }
  if (equality_.size() + inequality_.size() != n_) {
    throw DimensionError("cone partition does not cover all " + std::to_string(n_) +
                         " constraint indices");
  }
  std::vector<bool> seen(n_, false);
  for (const auto* set : {&equality_, &inequality_}) {
    for (std::size_t i : *set) {
      if (i >= n_ || seen[i]) {
        throw DimensionError("cone partition index " + std::to_string(i) +
                             " is out of range or listed twice");
      }
      seen[i] = true;
    }
  }
}

ConePartition ConePartition::all_inequality(std::size_t n) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  return ConePartition(n, {}, std::move(idx));
}

ConePartition ConePartition::all_equality(std::size_t n) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  return ConePartition(n, std::move(idx), {});
}

bool ConePartition::is_inequality(std::size_t i) const {
  return std::binary_search(inequality_.begin(), inequality_.end(), i);
}

ConstraintVector project_onto_cone(const ConstraintVector& y, const ConePartition& p) {
  check_length(y, p);
  ConstraintVector out(y.size());
  for (std::size_t i : p.equality_set()) out[i] = 0.0;
  for (std::size_t i : p.inequality_set()) out[i] = std::min(0.0, y[i]);
  return out;
}

double cone_distance(const ConstraintVector& y, const ConePartition& p) {
  return (y - project_onto_cone(y, p)).norm();
}

bool in_normal_cone(const ConstraintVector& v, const ConstraintVector& s, const ConePartition& p,
                    double tol) {
  check_length(v, p);
  check_length(s, p);
  for (std::size_t i : p.equality_set()) {
    if (std::abs(s[i]) > tol) return false;
  }
  for (std::size_t i : p.inequality_set()) {
    if (s[i] > tol) return false;
    if (v[i] < -tol) return false;
    if (std::abs(v[i] * s[i]) > tol) return false;
  }
  return true;
}

bool in_dual_cone(const ConstraintVector& y, const ConePartition& p, double tol) {
  check_length(y, p);
  return std::all_of(p.inequality_set().begin(), p.inequality_set().end(),
                     [&](std::size_t i) { return y[i] <= tol; });
}

}  // namespace salm
