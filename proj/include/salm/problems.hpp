#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "salm/problem.hpp"
#include "salm/shapes.hpp"

namespace salm {

/// j(u) = ||u||^2 on R^dim with 1 - u_i <= 0 for i < min(dim, 2).
///
/// Samples are J(u, xi) = ||u||^2 + sigma xi^T u with xi ~ N(0, I), so the
/// stochastic gradient is 2u + sigma xi. The KKT point is u_i = 1 with
/// lambda_i = 2 on constrained coordinates and u_i = 0 elsewhere.
/// `gradient_bias` adds a constant to every gradient oracle; it exists only
/// to build a deliberately inconsistent problem for negative tests.
ProblemDefinition quadratic_benchmark(int dim, double noise_sigma, double gradient_bias = 0.0);

/// J(u, xi) = 1/2 ||u - center||^2 + sigma xi^T u with xi ~ N(0, I): an
/// unconstrained objective with L = 1, minimum 0 and M^2 = sigma^2 dim.
StochasticObjectivePtr shifted_quadratic_objective(Vector center, double noise_sigma);

/// Placement of one curve of the multi-shape benchmark: the target is an
/// ellipse, the initial shape a circle.
struct CurveLayout {
  Eigen::Vector2d target_center{0.0, 0.0};
  double target_a = 0.6;
  double target_b = 0.45;
  double target_rotation = 0.0;
  Eigen::Vector2d initial_center{0.0, 0.0};
  double initial_radius = 0.5;
};

struct MultiShapeOptions {
  int num_curves = 3;
  int nodes_per_curve = 64;
  KLField kl{};
  /// Scale of the random normal perturbation of target nodes.
  double perturbation_amplitude = 0.1;
  double metric_c0 = 1.0;
  /// Per-curve bound factors relative to the target curve; a single entry
  /// applies to all curves. Defaults: 0.95 for volume, 1.05 for perimeter.
  std::vector<double> volume_scale{0.95};
  std::vector<double> perimeter_scale{1.05};
  /// Absolute bounds; when non-empty they replace the scaled ones.
  std::vector<double> volume_floor;
  std::vector<double> perimeter_cap;
  /// Project descent directions onto node normals before retracting.
  bool normal_projection = false;
  /// Empty layout selects default_layout(num_curves).
  std::vector<CurveLayout> layout;
};

/// Ellipse targets spread on a circle of radius 1.6 with circle initial
/// shapes offset from them.
std::vector<CurveLayout> default_layout(int num_curves);

/// N polygonal curves tracking random-field perturbed targets,
///   J(u, xi) = sum_i int_{u_i} ||x - c_i(x; xi)||^2 ds,
/// discretized with the trapezoidal rule on each polygon. Target node p of
/// curve i is  ref_p + a (kappa(x2_p, xi) - kappa(x2_p, 0)) n_p  with
/// x2_p = p / P, n_p the reference normal and a the perturbation amplitude.
/// One xi is shared by all curves of a sample. Constraints, in order:
/// vol(u_i) >= V_i for every curve, then per(u_i) <= P_i for every curve.
ProblemDefinition multishape_benchmark(const MultiShapeOptions& options);

/// Shape data of a multi-shape problem, for logging and plotting.
struct MultiShapeInfo {
  std::vector<Nodes> targets;
  std::vector<double> volume_floor;
  std::vector<double> perimeter_cap;
};
MultiShapeInfo multishape_info(const MultiShapeOptions& options);

/// Constants of the reference experiment, for config templating.
struct PaperDefaults {
  double mu1 = 10.0;
  double gamma = 10.0;
  double tau = 0.9;
  double lambda1 = 0.0;
  double box_lower = -100.0;
  double box_upper = 100.0;
  double step_scale = 20.0;  // t_k = step_scale / mu_k
  std::int64_t n1 = 5;
  std::int64_t m1 = 25;
  int kl_terms = 100;
  double kl_eta = 3.5;
  std::array<double, 3> volume_floors{0.035295, 0.025397, 0.036967};
  std::array<double, 3> perimeter_caps{0.72630, 0.56521, 0.69796};
  std::array<std::uint64_t, 4> seeds{964113, 454612, 421507, 107785};
};

PaperDefaults paper_defaults();

}  // namespace salm
