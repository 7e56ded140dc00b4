#include "salm/shapes.hpp"

#include <Eigen/Cholesky>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "salm/errors.hpp"

namespace salm {

namespace {

using Vec2 = Eigen::Vector2d;

Eigen::Index next(Eigen::Index p, Eigen::Index n) { return p + 1 == n ? 0 : p + 1; }
Eigen::Index prev(Eigen::Index p, Eigen::Index n) { return p == 0 ? n - 1 : p - 1; }

double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

int orientation(const Vec2& a, const Vec2& b, const Vec2& c) {
  const double v = cross(b - a, c - a);
  return (v > 0.0) - (v < 0.0);
}

bool on_segment(const Vec2& a, const Vec2& b, const Vec2& q) {
  return q.x() >= std::min(a.x(), b.x()) && q.x() <= std::max(a.x(), b.x()) &&
         q.y() >= std::min(a.y(), b.y()) && q.y() <= std::max(a.y(), b.y());
}

bool segments_intersect(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
  const int o1 = orientation(a, b, c);
  const int o2 = orientation(a, b, d);
  const int o3 = orientation(c, d, a);
  const int o4 = orientation(c, d, b);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(a, b, c)) return true;
  if (o2 == 0 && on_segment(a, b, d)) return true;
  if (o3 == 0 && on_segment(c, d, a)) return true;
  if (o4 == 0 && on_segment(c, d, b)) return true;
  return false;
}

bool point_in_polygon(const Vec2& q, const Nodes& poly) {
  bool inside = false;
  const Eigen::Index n = poly.cols();
  for (Eigen::Index i = 0, j = n - 1; i < n; j = i++) {
    const Vec2 a = poly.col(i);
    const Vec2 b = poly.col(j);
    if ((a.y() > q.y()) != (b.y() > q.y()) &&
        q.x() < (b.x() - a.x()) * (q.y() - a.y()) / (b.y() - a.y()) + a.x()) {
      inside = !inside;
    }
  }
  return inside;
}

void require_nodes(const Nodes& nodes) {
  if (nodes.cols() < 3) throw GeometryError("a closed polygon needs at least 3 nodes");
  if (!nodes.allFinite()) throw GeometryError("polygon has non-finite node coordinates");
}

Vector edge_lengths(const Nodes& nodes) {
  const Eigen::Index n = nodes.cols();
  Vector len(n);
  for (Eigen::Index p = 0; p < n; ++p) {
    len[p] = (nodes.col(next(p, n)) - nodes.col(p)).norm();
    if (!(len[p] > 0.0)) throw GeometryError("polygon has a zero-length edge");
  }
  return len;
}

}  // namespace

double signed_area(const Nodes& nodes) {
  require_nodes(nodes);
  const Eigen::Index n = nodes.cols();
  double sum = 0.0;
  for (Eigen::Index p = 0; p < n; ++p) {
    const Eigen::Index q = next(p, n);
    sum += nodes(0, p) * nodes(1, q) - nodes(0, q) * nodes(1, p);
  }
  return 0.5 * sum;
}

double polygon_perimeter(const Nodes& nodes) {
  require_nodes(nodes);
  return edge_lengths(nodes).sum();
}

Nodes signed_area_gradient(const Nodes& nodes) {
  require_nodes(nodes);
  const Eigen::Index n = nodes.cols();
  Nodes g(2, n);
  for (Eigen::Index p = 0; p < n; ++p) {
    const Eigen::Index a = prev(p, n);
    const Eigen::Index b = next(p, n);
    g(0, p) = 0.5 * (nodes(1, b) - nodes(1, a));
    g(1, p) = 0.5 * (nodes(0, a) - nodes(0, b));
  }
  return g;
}

Nodes polygon_perimeter_gradient(const Nodes& nodes) {
  require_nodes(nodes);
  const Eigen::Index n = nodes.cols();
  const Vector len = edge_lengths(nodes);
  Nodes g(2, n);
  for (Eigen::Index p = 0; p < n; ++p) {
    const Eigen::Index a = prev(p, n);
    const Eigen::Index b = next(p, n);
    g.col(p) = (nodes.col(p) - nodes.col(a)) / len[a] - (nodes.col(b) - nodes.col(p)) / len[p];
  }
  return g;
}

bool is_simple(const Nodes& nodes) {
  if (nodes.cols() < 3 || !nodes.allFinite()) return false;
  const Eigen::Index n = nodes.cols();
  for (Eigen::Index p = 0; p < n; ++p) {
    if ((nodes.col(next(p, n)) - nodes.col(p)).squaredNorm() == 0.0) return false;
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vec2 a = nodes.col(i);
    const Vec2 b = nodes.col(next(i, n));
    // Consecutive edges may only share their common node: reject fold-backs.
    const Vec2 c = nodes.col(next(next(i, n), n));
    if (orientation(a, b, c) == 0 && (b - a).dot(c - b) < 0.0) return false;
    for (Eigen::Index j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      const Vec2 d = nodes.col(j);
      const Vec2 e = nodes.col(next(j, n));
      if (std::max(a.x(), b.x()) < std::min(d.x(), e.x()) ||
          std::max(d.x(), e.x()) < std::min(a.x(), b.x()) ||
          std::max(a.y(), b.y()) < std::min(d.y(), e.y()) ||
          std::max(d.y(), e.y()) < std::min(a.y(), b.y())) {
        continue;
      }
      if (segments_intersect(a, b, d, e)) return false;
    }
  }
  return true;
}

Nodes node_normals(const Nodes& nodes) {
  require_nodes(nodes);
  const Eigen::Index n = nodes.cols();
  Nodes out(2, n);
  for (Eigen::Index p = 0; p < n; ++p) {
    const Vec2 t = nodes.col(next(p, n)) - nodes.col(prev(p, n));
    const double len = t.norm();
    if (!(len > 0.0)) throw GeometryError("cannot define a normal at a degenerate node");
    out.col(p) = Vec2(t.y(), -t.x()) / len;
  }
  return out;
}

Vector node_weights(const Nodes& nodes) {
  require_nodes(nodes);
  const Eigen::Index n = nodes.cols();
  const Vector len = edge_lengths(nodes);
  Vector w(n);
  for (Eigen::Index p = 0; p < n; ++p) w[p] = 0.5 * (len[prev(p, n)] + len[p]);
  return w;
}

Vector flatten(const Nodes& nodes) {
  return Eigen::Map<const Vector>(nodes.data(), nodes.size());
}

Nodes unflatten(const Vector& coords) {
  if (coords.size() % 2 != 0) throw DimensionError("flattened curve needs an even length");
  return Eigen::Map<const Nodes>(coords.data(), 2, coords.size() / 2);
}

PolygonCurve::PolygonCurve(Nodes nodes) : nodes_(std::move(nodes)) {
  require_nodes(nodes_);
  if (!is_simple(nodes_)) throw GeometryError("polygon is not simple");
  if (!(signed_area(nodes_) > 0.0)) {
    throw GeometryError("polygon must be counterclockwise with positive area");
  }
}

PolygonCurve regular_polygon(int count, double radius, Eigen::Vector2d center, double phase) {
  return ellipse_polygon(count, radius, radius, center, phase);
}

PolygonCurve ellipse_polygon(int count, double a, double b, Eigen::Vector2d center,
                             double rotation) {
  if (count < 3) throw GeometryError("a closed polygon needs at least 3 nodes");
  if (!(a > 0.0 && b > 0.0)) throw GeometryError("ellipse semi-axes must be positive");
  Nodes nodes(2, count);
  const double c = std::cos(rotation);
  const double s = std::sin(rotation);
  for (int p = 0; p < count; ++p) {
    const double theta = 2.0 * std::numbers::pi * p / count;
    const double x = a * std::cos(theta);
    const double y = b * std::sin(theta);
    nodes(0, p) = center.x() + c * x - s * y;
    nodes(1, p) = center.y() + s * x + c * y;
  }
  return PolygonCurve(std::move(nodes));
}

double volume(const PolygonCurve& c) {
  const double a = std::abs(signed_area(c.nodes()));
  if (!(a > 0.0)) throw GeometryError("degenerate polygon has zero area");
  return a;
}

double perimeter(const PolygonCurve& c) { return polygon_perimeter(c.nodes()); }

Nodes volume_gradient(const PolygonCurve& c) { return signed_area_gradient(c.nodes()); }

Nodes perimeter_gradient(const PolygonCurve& c) { return polygon_perimeter_gradient(c.nodes()); }

Matrix CurveMetricOperator::assemble(const Nodes& nodes) const {
  if (!(c0 > 0.0)) throw ParameterError("curve metric needs c0 > 0");
  const Eigen::Index n = nodes.cols();
  const Vector len = edge_lengths(nodes);
  Matrix a = Matrix::Zero(n, n);
  for (Eigen::Index p = 0; p < n; ++p) {
    const Eigen::Index q = next(p, n);
    const double k = 1.0 / len[p];
    a(p, p) += k;
    a(q, q) += k;
    a(p, q) -= k;
    a(q, p) -= k;
  }
  a.diagonal() += c0 * node_weights(nodes);
  return a;
}

double CurveMetricOperator::apply(const Nodes& nodes, const Nodes& v, const Nodes& w) const {
  if (v.cols() != nodes.cols() || w.cols() != nodes.cols()) {
    throw DimensionError("displacement field does not match the curve");
  }
  const Matrix a = assemble(nodes);
  return (v.row(0) * a * w.row(0).transpose())(0, 0) + (v.row(1) * a * w.row(1).transpose())(0, 0);
}

Nodes CurveMetricOperator::solve(const Nodes& nodes, const Nodes& differential) const {
  if (differential.cols() != nodes.cols()) {
    throw DimensionError("differential does not match the curve");
  }
  const Eigen::LLT<Matrix> llt(assemble(nodes));
  if (llt.info() != Eigen::Success) throw NumericalError("curve metric is not positive definite");
  Nodes out(2, nodes.cols());
  out.row(0) = llt.solve(differential.row(0).transpose()).transpose();
  out.row(1) = llt.solve(differential.row(1).transpose()).transpose();
  return out;
}

TangentVector riesz_representation(const PolygonCurve& c, const Nodes& differential,
                                   const CurveMetricOperator& metric) {
  return {flatten(c.nodes()), flatten(metric.solve(c.nodes(), differential))};
}

PolygonCurve retract_curve(const PolygonCurve& c, const Nodes& v, double step) {
  if (v.cols() != c.size()) throw DimensionError("displacement field does not match the curve");
  Nodes moved = c.nodes() + step * v;
  if (!is_simple(moved) || !(signed_area(moved) > 0.0)) {
    throw StepRejected("retracted curve is not simple and counterclockwise");
  }
  return PolygonCurve(std::move(moved));
}

CurveManifold::CurveManifold(int nodes_per_curve, CurveMetricOperator metric)
    : nodes_(nodes_per_curve), metric_(metric) {
  if (nodes_ < 3) throw ParameterError("a curve needs at least 3 nodes");
  if (!(metric_.c0 > 0.0)) throw ParameterError("curve metric needs c0 > 0");
}

double CurveManifold::inner(const Point& u, const Vector& v, const Vector& w) const {
  return metric_.apply(unflatten(u), unflatten(v), unflatten(w));
}

Point CurveManifold::retraction(const Point& u, const Vector& v) const {
  if (u.size() != v.size()) throw DimensionError("tangent vector does not match the curve");
  Point moved = u + v;
  const Nodes nodes = unflatten(moved);
  if (!is_simple(nodes) || !(signed_area(nodes) > 0.0)) {
    throw StepRejected("retracted curve is not simple and counterclockwise");
  }
  return moved;
}

double CurveManifold::distance(const Point& u, const Point& w) const {
  const Nodes d = unflatten(w - u);
  const double sq = 0.5 * (metric_.apply(unflatten(u), d, d) + metric_.apply(unflatten(w), d, d));
  return std::sqrt(std::max(0.0, sq));
}

Vector CurveManifold::riesz(const Point& u, const Vector& differential) const {
  return flatten(metric_.solve(unflatten(u), unflatten(differential)));
}

void CurveManifold::validate(const Point& u) const {
  Manifold::validate(u);
  PolygonCurve{unflatten(u)};
}

MultiShapeManifold::MultiShapeManifold(int num_curves, int nodes_per_curve,
                                       CurveMetricOperator metric)
    : ProductManifold([&] {
        if (num_curves < 1) throw ParameterError("multi-shape needs at least one curve");
        std::vector<ManifoldPtr> f;
        auto curve = std::make_shared<const CurveManifold>(nodes_per_curve, metric);
        for (int i = 0; i < num_curves; ++i) f.push_back(curve);
        return f;
      }()),
      num_curves_(num_curves),
      nodes_per_curve_(nodes_per_curve) {}

Nodes MultiShapeManifold::curve_nodes(const Point& u, int i) const {
  return unflatten(Vector(block(u, static_cast<std::size_t>(i))));
}

Point MultiShapeManifold::retraction(const Point& u, const Vector& v) const {
  Point moved = ProductManifold::retraction(u, v);
  std::vector<Nodes> curves;
  for (int i = 0; i < num_curves_; ++i) curves.push_back(curve_nodes(moved, i));
  if (!curves_disjoint(curves)) throw StepRejected("retracted curves overlap");
  return moved;
}

void MultiShapeManifold::validate(const Point& u) const {
  ProductManifold::validate(u);
  std::vector<Nodes> curves;
  for (int i = 0; i < num_curves_; ++i) curves.push_back(curve_nodes(u, i));
  if (!curves_disjoint(curves)) throw GeometryError("curves overlap");
}

bool curves_disjoint(const std::vector<Nodes>& curves) {
  for (std::size_t i = 0; i < curves.size(); ++i) {
    for (std::size_t j = i + 1; j < curves.size(); ++j) {
      const Nodes& a = curves[i];
      const Nodes& b = curves[j];
      const Vec2 amin = a.rowwise().minCoeff(), amax = a.rowwise().maxCoeff();
      const Vec2 bmin = b.rowwise().minCoeff(), bmax = b.rowwise().maxCoeff();
      if ((amax.array() < bmin.array()).any() || (bmax.array() < amin.array()).any()) continue;
      for (Eigen::Index p = 0; p < a.cols(); ++p) {
        const Vec2 a0 = a.col(p), a1 = a.col(next(p, a.cols()));
        for (Eigen::Index q = 0; q < b.cols(); ++q) {
          if (segments_intersect(a0, a1, b.col(q), b.col(next(q, b.cols())))) return false;
        }
      }
      if (point_in_polygon(a.col(0), b) || point_in_polygon(b.col(0), a)) return false;
    }
  }
  return true;
}

Vector project_onto_normals(const Nodes& nodes, const Vector& displacement) {
  const Nodes n = node_normals(nodes);
  const Nodes v = unflatten(displacement);
  Nodes out(2, nodes.cols());
  for (Eigen::Index p = 0; p < nodes.cols(); ++p) out.col(p) = n.col(p).dot(v.col(p)) * n.col(p);
  return flatten(out);
}

void write_curve_file(const std::filesystem::path& path, const Nodes& nodes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  char buf[64];
  for (Eigen::Index p = 0; p < nodes.cols(); ++p) {
    for (int r = 0; r < 2; ++r) {
      const auto res = std::to_chars(buf, buf + sizeof buf, nodes(r, p));
      out.write(buf, res.ptr - buf);
      out.put(r == 0 ? ' ' : '\n');
    }
  }
}

Nodes read_curve_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::vector<double> xs, ys;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream row(line);
    row.imbue(std::locale::classic());
    double x = 0.0, y = 0.0;
    std::string rest;
    if (!(row >> x >> y) || (row >> rest)) {
      throw Error(path.string() + ":" + std::to_string(line_no) + ": expected \"x y\"");
    }
    xs.push_back(x);
    ys.push_back(y);
  }
  Nodes nodes(2, static_cast<Eigen::Index>(xs.size()));
  for (std::size_t p = 0; p < xs.size(); ++p) {
    nodes(0, static_cast<Eigen::Index>(p)) = xs[p];
    nodes(1, static_cast<Eigen::Index>(p)) = ys[p];
  }
  return nodes;
}

}  // namespace salm
