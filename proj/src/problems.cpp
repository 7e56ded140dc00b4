#include "salm/problems.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "salm/errors.hpp"

namespace salm {

void ProblemDefinition::validate() const {
  if (!manifold || !objective || !constraints) {
    throw ParameterError("problem '" + name + "' is missing a manifold, objective or constraints");
  }
  manifold->validate(initial_point);
  if (known_solution) {
    manifold->validate(known_solution->u);
    if (static_cast<std::size_t>(known_solution->lambda.size()) != constraints->size()) {
      throw DimensionError("known multiplier length does not match the constraint count");
    }
  }
}

// ---------------------------------------------------------------------------
// Quadratic benchmarks

namespace {

class QuadraticObjective final : public StochasticObjective {
 public:
  QuadraticObjective(double sigma, double bias) : sigma_(sigma), bias_(bias) {}

  ObjectiveSample sample(const Point& u, RngStream& rng) const override {
    Vector xi(u.size());
    for (auto& x : xi) x = rng.normal();
    return {u.squaredNorm() + sigma_ * xi.dot(u),
            {u, 2.0 * u + sigma_ * xi + Vector::Constant(u.size(), bias_)}};
  }

  std::optional<ObjectiveSample> expectation(const Point& u) const override {
    return ObjectiveSample{u.squaredNorm(), {u, 2.0 * u + Vector::Constant(u.size(), bias_)}};
  }

 private:
  double sigma_;
  double bias_;
};

class ShiftedQuadraticObjective final : public StochasticObjective {
 public:
  ShiftedQuadraticObjective(Vector center, double sigma) : center_(std::move(center)), sigma_(sigma) {}

  ObjectiveSample sample(const Point& u, RngStream& rng) const override {
    check(u);
    Vector xi(u.size());
    for (auto& x : xi) x = rng.normal();
    return {0.5 * (u - center_).squaredNorm() + sigma_ * xi.dot(u), {u, u - center_ + sigma_ * xi}};
  }

  std::optional<ObjectiveSample> expectation(const Point& u) const override {
    check(u);
    return ObjectiveSample{0.5 * (u - center_).squaredNorm(), {u, u - center_}};
  }

 private:
  void check(const Point& u) const {
    if (u.size() != center_.size()) throw DimensionError("point does not match the objective");
  }

  Vector center_;
  double sigma_;
};

}  // namespace

ProblemDefinition quadratic_benchmark(int dim, double noise_sigma, double gradient_bias) {
  if (dim < 1) throw ParameterError("quadratic benchmark needs dim >= 1");
  if (!(noise_sigma >= 0.0)) throw ParameterError("noise sigma must be nonnegative");
  const int n = std::min(dim, 2);

  ProblemDefinition p;
  p.name = "quadratic";
  p.manifold = std::make_shared<const EuclideanSpace>(static_cast<std::size_t>(dim));
  p.objective = std::make_shared<const QuadraticObjective>(noise_sigma, gradient_bias);
  p.constraints = std::make_shared<const FunctionConstraintSystem>(
      ConePartition::all_inequality(static_cast<std::size_t>(n)),
      [n](const Point& u) {
        ConstraintVector h(n);
        for (int i = 0; i < n; ++i) h[i] = 1.0 - u[i];
        return h;
      },
      [n](const Point& u) {
        std::vector<TangentVector> g;
        for (int i = 0; i < n; ++i) {
          TangentVector t = TangentVector::zero(u);
          t.components[i] = -1.0;
          g.push_back(std::move(t));
        }
        return g;
      });
  p.initial_point = Point::Zero(dim);
  Point u_star = Point::Zero(dim);
  u_star.head(n).setOnes();
  if (gradient_bias == 0.0) p.known_solution = KnownSolution{u_star, Vector::Constant(n, 2.0)};
  // grad L_A is piecewise linear with slope at most 2 + mu.
  p.lipschitz = [](double mu) { return 2.0 + mu; };
  return p;
}

StochasticObjectivePtr shifted_quadratic_objective(Vector center, double noise_sigma) {
  if (!(noise_sigma >= 0.0)) throw ParameterError("noise sigma must be nonnegative");
  return std::make_shared<const ShiftedQuadraticObjective>(std::move(center), noise_sigma);
}

// ---------------------------------------------------------------------------
// Multi-shape benchmark

std::vector<CurveLayout> default_layout(int num_curves) {
  if (num_curves < 1) throw ParameterError("multi-shape needs at least one curve");
  static constexpr std::array<double, 3> kSize{1.0, 0.85, 1.1};
  std::vector<CurveLayout> out;
  for (int i = 0; i < num_curves; ++i) {
    CurveLayout c;
    const double f = kSize[static_cast<std::size_t>(i) % kSize.size()];
    if (num_curves > 1) {
      const double phi = std::numbers::pi / 2 + 2.0 * std::numbers::pi * i / num_curves;
      c.target_center = 1.6 * Eigen::Vector2d(std::cos(phi), std::sin(phi));
    }
    c.target_a = 0.6 * f;
    c.target_b = 0.45 * f;
    c.target_rotation = 0.6 * i;
    const double offset_angle = 1.0 + 2.0 * i;
    c.initial_center =
        c.target_center + 0.15 * Eigen::Vector2d(std::cos(offset_angle), std::sin(offset_angle));
    c.initial_radius = 0.5 * f;
    out.push_back(c);
  }
  return out;
}

namespace {

double per_curve(const std::vector<double>& v, int i, const char* what) {
  if (v.size() == 1) return v.front();
  if (v.size() <= static_cast<std::size_t>(i)) {
    throw ParameterError(std::string(what) + " needs one entry or one per curve");
  }
  return v[static_cast<std::size_t>(i)];
}

struct ShapeSetup {
  std::vector<CurveLayout> layout;
  std::vector<Nodes> targets;
  std::vector<Nodes> initial;
  std::vector<double> volume_floor;
  std::vector<double> perimeter_cap;
};

ShapeSetup build_setup(const MultiShapeOptions& o) {
  if (o.num_curves < 1) throw ParameterError("multi-shape needs at least one curve");
  if (o.nodes_per_curve < 8) throw ParameterError("multi-shape needs at least 8 nodes per curve");
  o.kl.validate();
  if (!(o.perturbation_amplitude >= 0.0)) throw ParameterError("amplitude must be nonnegative");
  ShapeSetup s;
  s.layout = o.layout.empty() ? default_layout(o.num_curves) : o.layout;
  if (s.layout.size() != static_cast<std::size_t>(o.num_curves)) {
    throw ParameterError("layout must list one entry per curve");
  }
  for (int i = 0; i < o.num_curves; ++i) {
    const CurveLayout& c = s.layout[static_cast<std::size_t>(i)];
    const PolygonCurve target =
        ellipse_polygon(o.nodes_per_curve, c.target_a, c.target_b, c.target_center,
                        c.target_rotation);
    const PolygonCurve init = regular_polygon(o.nodes_per_curve, c.initial_radius,
                                              c.initial_center, c.target_rotation);
    s.targets.push_back(target.nodes());
    s.initial.push_back(init.nodes());
    s.volume_floor.push_back(o.volume_floor.empty()
                                 ? per_curve(o.volume_scale, i, "volume_scale") * volume(target)
                                 : per_curve(o.volume_floor, i, "volume_floor"));
    s.perimeter_cap.push_back(o.perimeter_cap.empty()
                                  ? per_curve(o.perimeter_scale, i, "perimeter_scale") *
                                        perimeter(target)
                                  : per_curve(o.perimeter_cap, i, "perimeter_cap"));
  }
  if (!curves_disjoint(s.targets)) throw GeometryError("target curves overlap");
  if (!curves_disjoint(s.initial)) throw GeometryError("initial curves overlap");
  return s;
}

// Tracking functional of all curves. For one curve with nodes u_p, targets
// t_p = ref_p + a k_p n_p and D_p = ||u_p - t_p||^2 the trapezoidal value is
// sum_e |e| (D_a + D_b) / 2. It is linear in D_p and u_p - t_p, so means over
// samples only need the first two moments of k_p.
class CurveTrackingObjective final : public StochasticObjective {
 public:
  CurveTrackingObjective(std::shared_ptr<const MultiShapeManifold> manifold,
                         std::vector<Nodes> refs, KLField kl, double amplitude)
      : manifold_(std::move(manifold)), refs_(std::move(refs)), kl_(kl), amplitude_(amplitude) {
    const int np = manifold_->nodes_per_curve();
    basis_.resize(np, kl_.num_terms);
    for (int p = 0; p < np; ++p) {
      basis_.row(p) = kl_.basis(static_cast<double>(p) / np).transpose();
    }
    variance_ = basis_.rowwise().squaredNorm() / 12.0;
    for (const Nodes& r : refs_) normals_.push_back(node_normals(r));
  }

  ObjectiveSample sample(const Point& u, RngStream& rng) const override {
    const Vector xi = draw_kl_coefficients(kl_, rng);
    const Vector dk = basis_ * xi;
    Vector differential(u.size());
    double value = 0.0;
    for (int i = 0; i < manifold_->num_curves(); ++i) {
      const Nodes nodes = manifold_->curve_nodes(u, i);
      Nodes targets = refs_[static_cast<std::size_t>(i)];
      for (Eigen::Index p = 0; p < targets.cols(); ++p) {
        targets.col(p) += amplitude_ * dk[p] * normals_[static_cast<std::size_t>(i)].col(p);
      }
      const Nodes diff = nodes - targets;
      const Vector d = diff.colwise().squaredNorm().transpose();
      value += accumulate(nodes, d, diff, differential, i);
    }
    return {value, {u, manifold_->riesz(u, differential)}};
  }

  ObjectiveSample batch_mean(const Point& u, std::size_t m, const RngStream& stream) const override {
    Vector s1 = Vector::Zero(basis_.rows());
    Vector s2 = Vector::Zero(basis_.rows());
    for (std::size_t s = 1; s <= m; ++s) {
      RngStream rng = stream.substream(s);
      const Vector dk = basis_ * draw_kl_coefficients(kl_, rng);
      s1 += dk;
      s2 += dk.cwiseProduct(dk);
    }
    const double inv = 1.0 / static_cast<double>(m);
    return from_moments(u, s1 * inv, s2 * inv);
  }

  std::optional<ObjectiveSample> expectation(const Point& u) const override {
    return from_moments(u, Vector::Zero(basis_.rows()), variance_);
  }

 private:
  // Mean value and differential given E[k_p] = s1_p and E[k_p^2] = s2_p.
  ObjectiveSample from_moments(const Point& u, const Vector& s1, const Vector& s2) const {
    Vector differential(u.size());
    double value = 0.0;
    const double a = amplitude_;
    for (int i = 0; i < manifold_->num_curves(); ++i) {
      const Nodes nodes = manifold_->curve_nodes(u, i);
      const Nodes& n = normals_[static_cast<std::size_t>(i)];
      const Nodes e = nodes - refs_[static_cast<std::size_t>(i)];
      Vector d(nodes.cols());
      Nodes mean_diff(2, nodes.cols());
      for (Eigen::Index p = 0; p < nodes.cols(); ++p) {
        const double en = e.col(p).dot(n.col(p));
        d[p] = e.col(p).squaredNorm() - 2.0 * a * en * s1[p] + a * a * s2[p];
        mean_diff.col(p) = e.col(p) - a * s1[p] * n.col(p);
      }
      value += accumulate(nodes, d, mean_diff, differential, i);
    }
    return {value, {u, manifold_->riesz(u, differential)}};
  }

  // Adds the trapezoidal value of curve i and writes its differential block.
  double accumulate(const Nodes& nodes, const Vector& d, const Nodes& diff, Vector& differential,
                    int i) const {
    const Eigen::Index np = nodes.cols();
    Nodes g = Nodes::Zero(2, np);
    double value = 0.0;
    for (Eigen::Index p = 0; p < np; ++p) {
      const Eigen::Index q = p + 1 == np ? 0 : p + 1;
      const Eigen::Vector2d edge = nodes.col(q) - nodes.col(p);
      const double len = edge.norm();
      const double avg = 0.5 * (d[p] + d[q]);
      value += len * avg;
      const Eigen::Vector2d dlen = edge / len;  // derivative of |e| w.r.t. the end node
      g.col(p) += -avg * dlen + len * diff.col(p);
      g.col(q) += avg * dlen + len * diff.col(q);
    }
    differential.segment(static_cast<Eigen::Index>(manifold_->offset(static_cast<std::size_t>(i))),
                         2 * np) = flatten(g);
    return value;
  }

  std::shared_ptr<const MultiShapeManifold> manifold_;
  std::vector<Nodes> refs_;
  std::vector<Nodes> normals_;
  KLField kl_;
  double amplitude_;
  Matrix basis_;
  Vector variance_;
};

class ShapeConstraints final : public ConstraintSystem {
 public:
  ShapeConstraints(std::shared_ptr<const MultiShapeManifold> manifold,
                   std::vector<double> volume_floor, std::vector<double> perimeter_cap)
      : manifold_(std::move(manifold)),
        partition_(ConePartition::all_inequality(2 * static_cast<std::size_t>(
                                                         manifold_->num_curves()))),
        volume_floor_(std::move(volume_floor)),
        perimeter_cap_(std::move(perimeter_cap)) {}

  const ConePartition& partition() const override { return partition_; }

  ConstraintVector value(const Point& u) const override {
    const int n = manifold_->num_curves();
    ConstraintVector h(2 * n);
    for (int i = 0; i < n; ++i) {
      const Nodes nodes = manifold_->curve_nodes(u, i);
      h[i] = volume_floor_[static_cast<std::size_t>(i)] - signed_area(nodes);
      h[n + i] = polygon_perimeter(nodes) - perimeter_cap_[static_cast<std::size_t>(i)];
    }
    return h;
  }

  std::vector<TangentVector> gradient(const Point& u) const override {
    const int n = manifold_->num_curves();
    std::vector<TangentVector> out(2 * static_cast<std::size_t>(n), TangentVector::zero(u));
    for (int i = 0; i < n; ++i) {
      const auto off = static_cast<Eigen::Index>(manifold_->offset(static_cast<std::size_t>(i)));
      const Nodes nodes = manifold_->curve_nodes(u, i);
      const auto& factor = manifold_->factor(static_cast<std::size_t>(i));
      const Point block = flatten(nodes);
      out[static_cast<std::size_t>(i)].components.segment(off, block.size()) =
          factor.riesz(block, flatten(-signed_area_gradient(nodes)));
      out[static_cast<std::size_t>(n + i)].components.segment(off, block.size()) =
          factor.riesz(block, flatten(polygon_perimeter_gradient(nodes)));
    }
    return out;
  }

 private:
  std::shared_ptr<const MultiShapeManifold> manifold_;
  ConePartition partition_;
  std::vector<double> volume_floor_;
  std::vector<double> perimeter_cap_;
};

}  // namespace

MultiShapeInfo multishape_info(const MultiShapeOptions& options) {
  ShapeSetup s = build_setup(options);
  return {std::move(s.targets), std::move(s.volume_floor), std::move(s.perimeter_cap)};
}

ProblemDefinition multishape_benchmark(const MultiShapeOptions& options) {
  ShapeSetup s = build_setup(options);
  auto manifold = std::make_shared<const MultiShapeManifold>(
      options.num_curves, options.nodes_per_curve, CurveMetricOperator{options.metric_c0});

  ProblemDefinition p;
  p.name = "multishape";
  p.manifold = manifold;
  p.objective = std::make_shared<const CurveTrackingObjective>(
      manifold, s.targets, options.kl, options.perturbation_amplitude);
  p.constraints =
      std::make_shared<const ShapeConstraints>(manifold, s.volume_floor, s.perimeter_cap);
  Point u0(static_cast<Eigen::Index>(manifold->dimension()));
  for (int i = 0; i < options.num_curves; ++i) {
    u0.segment(static_cast<Eigen::Index>(manifold->offset(static_cast<std::size_t>(i))),
               2 * options.nodes_per_curve) = flatten(s.initial[static_cast<std::size_t>(i)]);
  }
  p.initial_point = std::move(u0);
  if (options.normal_projection) {
    p.step_transform = [manifold](const Point& u, const Vector& v) {
      Vector out(v.size());
      for (int i = 0; i < manifold->num_curves(); ++i) {
        const auto off = static_cast<Eigen::Index>(manifold->offset(static_cast<std::size_t>(i)));
        const auto len = static_cast<Eigen::Index>(2 * manifold->nodes_per_curve());
        out.segment(off, len) =
            project_onto_normals(manifold->curve_nodes(u, i), Vector(v.segment(off, len)));
      }
      return out;
    };
  }
  return p;
}

PaperDefaults paper_defaults() { return {}; }

}  // namespace salm
