#include "salm/manifold.hpp"

#include <cmath>
#include <numeric>

#include "salm/errors.hpp"

namespace salm {

namespace {

void check_dim(const Vector& x, std::size_t dim, const char* what) {
  if (static_cast<std::size_t>(x.size()) != dim) {
    throw DimensionError(std::string(what) + " has dimension " + std::to_string(x.size()) +
                         ", expected " + std::to_string(dim));
  }
}

}  // namespace

void Manifold::validate(const Point& u) const {
  check_dim(u, dimension(), "point");
  if (!u.allFinite()) throw DomainError("point has non-finite coordinates");
}

EuclideanSpace::EuclideanSpace(std::size_t dim) : dim_(dim) {
  if (dim == 0) throw ParameterError("Euclidean space needs dimension >= 1");
}

double EuclideanSpace::inner(const Point& u, const Vector& v, const Vector& w) const {
  check_dim(u, dim_, "point");
  check_dim(v, dim_, "tangent vector");
  check_dim(w, dim_, "tangent vector");
  return v.dot(w);
}

Point EuclideanSpace::retraction(const Point& u, const Vector& v) const {
  check_dim(u, dim_, "point");
  check_dim(v, dim_, "tangent vector");
  return u + v;
}

std::optional<Point> EuclideanSpace::exponential(const Point& u, const Vector& v) const {
  return retraction(u, v);
}

double EuclideanSpace::distance(const Point& u, const Point& w) const {
  check_dim(u, dim_, "point");
  check_dim(w, dim_, "point");
  return (u - w).norm();
}

Vector EuclideanSpace::riesz(const Point& u, const Vector& differential) const {
  check_dim(u, dim_, "point");
  check_dim(differential, dim_, "differential");
  return differential;
}

ProductManifold::ProductManifold(std::vector<ManifoldPtr> factors) : factors_(std::move(factors)) {
  if (factors_.empty()) throw ParameterError("product manifold needs at least one factor");
  offsets_.reserve(factors_.size() + 1);
  offsets_.push_back(0);
  for (const auto& f : factors_) {
    if (!f) throw ParameterError("product manifold factor is null");
    offsets_.push_back(offsets_.back() + f->dimension());
  }
}

std::string ProductManifold::name() const {
  std::string out = "product(";
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (i) out += ",";
    out += factors_[i]->name();
  }
  return out + ")";
}

double ProductManifold::inner(const Point& u, const Vector& v, const Vector& w) const {
  check_dim(u, dimension(), "point");
  check_dim(v, dimension(), "tangent vector");
  check_dim(w, dimension(), "tangent vector");
  double sum = 0.0;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    sum += factors_[i]->inner(block(u, i), block(v, i), block(w, i));
  }
  return sum;
}

Point ProductManifold::retraction(const Point& u, const Vector& v) const {
  check_dim(u, dimension(), "point");
  check_dim(v, dimension(), "tangent vector");
  Point out(u.size());
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    out.segment(offsets_[i], factor_dimension(i)) =
        factors_[i]->retraction(block(u, i), block(v, i));
  }
  return out;
}

std::optional<Point> ProductManifold::exponential(const Point& u, const Vector& v) const {
  check_dim(u, dimension(), "point");
  check_dim(v, dimension(), "tangent vector");
  Point out(u.size());
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    auto part = factors_[i]->exponential(block(u, i), block(v, i));
    if (!part) return std::nullopt;
    out.segment(offsets_[i], factor_dimension(i)) = *part;
  }
  return out;
}

double ProductManifold::distance(const Point& u, const Point& w) const {
  check_dim(u, dimension(), "point");
  check_dim(w, dimension(), "point");
  double sq = 0.0;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    const double d = factors_[i]->distance(block(u, i), block(w, i));
    sq += d * d;
  }
  return std::sqrt(sq);
}

Vector ProductManifold::riesz(const Point& u, const Vector& differential) const {
  check_dim(u, dimension(), "point");
  check_dim(differential, dimension(), "differential");
  Vector out(u.size());
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    out.segment(offsets_[i], factor_dimension(i)) =
        factors_[i]->riesz(block(u, i), block(differential, i));
  }
  return out;
}

void ProductManifold::validate(const Point& u) const {
  check_dim(u, dimension(), "point");
  for (std::size_t i = 0; i < factors_.size(); ++i) factors_[i]->validate(block(u, i));
}

void require_base(const Point& u, const TangentVector& v) {
  if (v.base.size() != u.size() || v.base != u) {
    throw DomainError("tangent vector is not attached to the given base point");
  }
  if (v.components.size() != u.size()) {
    throw DimensionError("tangent vector components do not match the base point dimension");
  }
}

double metric_inner(const Manifold& m, const Point& u, const TangentVector& v,
                    const TangentVector& w) {
  require_base(u, v);
  require_base(u, w);
  return m.inner(u, v.components, w.components);
}

double metric_norm(const Manifold& m, const Point& u, const TangentVector& v) {
  require_base(u, v);
  return std::sqrt(std::max(0.0, m.inner(u, v.components, v.components)));
}

Point retract(const Manifold& m, const Point& u, const TangentVector& v) {
  require_base(u, v);
  return m.retraction(u, v.components);
}

double distance(const Manifold& m, const Point& u, const Point& w) { return m.distance(u, w); }

TangentVector gradient_from_differential(const Manifold& m, const Point& u,
                                         const Vector& differential) {
  return {u, m.riesz(u, differential)};
}

}  // namespace salm
