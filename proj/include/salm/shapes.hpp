#pragma once

#include <filesystem>
#include <vector>

#include "salm/manifold.hpp"

namespace salm {

/// Node coordinates of a closed polygon, one column per node.
using Nodes = Eigen::Matrix2Xd;

// Raw polygon geometry. Node p connects to node p + 1 and the last node to the
// first. Gradients are derivatives with respect to node coordinates.

/// Shoelace sum 1/2 sum (x_p y_{p+1} - x_{p+1} y_p); positive for
/// counterclockwise orientation.
double signed_area(const Nodes& nodes);
double polygon_perimeter(const Nodes& nodes);
Nodes signed_area_gradient(const Nodes& nodes);
Nodes polygon_perimeter_gradient(const Nodes& nodes);
/// True when no two edges meet except consecutive edges at their shared node.
bool is_simple(const Nodes& nodes);
/// Outward unit normals at nodes of a counterclockwise polygon, from the
/// chord between the two neighbours.
Nodes node_normals(const Nodes& nodes);
/// Trapezoidal arc-length weights (|e_in| + |e_out|) / 2.
Vector node_weights(const Nodes& nodes);

/// Flattened [x_0, y_0, x_1, y_1, ...] view of node coordinates.
Vector flatten(const Nodes& nodes);
Nodes unflatten(const Vector& coords);

/// A closed, simple, counterclockwise polygon with P >= 3 nodes.
class PolygonCurve {
 public:
  /// Throws GeometryError unless the polygon is simple with positive area.
  explicit PolygonCurve(Nodes nodes);

  const Nodes& nodes() const { return nodes_; }
  Eigen::Index size() const { return nodes_.cols(); }

 private:
  Nodes nodes_;
};

/// Regular polygon with `count` nodes, node 0 at angle `phase`.
PolygonCurve regular_polygon(int count, double radius, Eigen::Vector2d center = {0, 0},
                             double phase = 0.0);
/// Polygon through `count` equally spaced parameter values of an ellipse with
/// semi-axes a, b rotated by `rotation`.
PolygonCurve ellipse_polygon(int count, double a, double b, Eigen::Vector2d center = {0, 0},
                             double rotation = 0.0);

double volume(const PolygonCurve& c);
double perimeter(const PolygonCurve& c);
Nodes volume_gradient(const PolygonCurve& c);
Nodes perimeter_gradient(const PolygonCurve& c);

/// Discrete H1 + L2 form on node displacements of one curve:
///   a(v, w) = sum_edges (dv . dw) / |e| + c0 sum_nodes (v_p . w_p) weight_p
/// with dv the difference of v across an edge and weight_p the arc-length
/// weight of node p. The same P x P matrix acts on x and y components.
struct CurveMetricOperator {
  double c0 = 1.0;

  Matrix assemble(const Nodes& nodes) const;
  double apply(const Nodes& nodes, const Nodes& v, const Nodes& w) const;
  /// Solves a(g, w) = differential[w] for all w.
  Nodes solve(const Nodes& nodes, const Nodes& differential) const;
};

/// Gradient of a node functional with respect to the curve metric.
TangentVector riesz_representation(const PolygonCurve& c, const Nodes& differential,
                                   const CurveMetricOperator& metric);

/// Nodes moved by step * v. Throws StepRejected when the result is not a
/// valid curve.
PolygonCurve retract_curve(const PolygonCurve& c, const Nodes& v, double step);

/// Single closed curve with `nodes_per_curve` nodes, the curve metric and the
/// additive retraction. Coordinates are flattened node positions. The
/// distance is sqrt((a_u(d, d) + a_w(d, d)) / 2) with d = w - u.
class CurveManifold final : public Manifold {
 public:
  CurveManifold(int nodes_per_curve, CurveMetricOperator metric);

  std::string name() const override { return "curve"; }
  std::size_t dimension() const override { return 2 * static_cast<std::size_t>(nodes_); }
  double inner(const Point& u, const Vector& v, const Vector& w) const override;
  Point retraction(const Point& u, const Vector& v) const override;
  double distance(const Point& u, const Point& w) const override;
  Vector riesz(const Point& u, const Vector& differential) const override;
  void validate(const Point& u) const override;

  const CurveMetricOperator& metric() const { return metric_; }

 private:
  int nodes_;
  CurveMetricOperator metric_;
};

/// Product of N curve manifolds whose curves must also have pairwise
/// disjoint interiors.
class MultiShapeManifold final : public ProductManifold {
 public:
  MultiShapeManifold(int num_curves, int nodes_per_curve, CurveMetricOperator metric);

  std::string name() const override { return "multishape"; }
  Point retraction(const Point& u, const Vector& v) const override;
  void validate(const Point& u) const override;

  int num_curves() const { return num_curves_; }
  int nodes_per_curve() const { return nodes_per_curve_; }
  Nodes curve_nodes(const Point& u, int i) const;

 private:
  int num_curves_;
  int nodes_per_curve_;
};

/// True when the polygons pairwise neither cross nor contain each other.
bool curves_disjoint(const std::vector<Nodes>& curves);

/// Replaces each node displacement by its component along the node normal.
Vector project_onto_normals(const Nodes& nodes, const Vector& displacement);

/// Plain text, one "x y" row per node.
void write_curve_file(const std::filesystem::path& path, const Nodes& nodes);
Nodes read_curve_file(const std::filesystem::path& path);

}  // namespace salm
