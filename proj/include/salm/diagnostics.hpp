#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "salm/outer_auglag.hpp"
#include "salm/problem.hpp"

namespace salm {

/// Residuals of the KKT system at (u, lambda).
struct KktReport {
  double stationarity_norm = 0.0;   // ||grad j + sum lambda_i grad h_i||_G
  double feasibility_norm = 0.0;    // dist_K(h(u))
  double complementarity_max = 0.0; // max over inequalities of |lambda_i h_i|
  double dual_violation_max = 0.0;  // max over inequalities of max(0, -lambda_i)

  bool is_kkt(double tol) const;
};

/// Uses `j_grad` when given, else the exact expectation of the objective.
/// Throws ParameterError when neither is available.
KktReport kkt_check(const ProblemDefinition& problem, const Point& u, const Vector& lambda,
                    const std::optional<TangentVector>& j_grad = std::nullopt);

struct Iterate {
  Point u;
  Vector lambda;
};

struct AkktResidual {
  double stationarity = 0.0;
  /// |pi_K(-h(u))^T lambda|.
  double complementarity = 0.0;
  /// Distance of lambda from the dual cone, reported on its own.
  double dual_violation = 0.0;
};

std::vector<AkktResidual> akkt_residuals(const ProblemDefinition& problem,
                                         std::span<const Iterate> trajectory);

/// Iterates (u^{k+1}, lambda^{k+1}) of a finished run.
std::vector<Iterate> trajectory_of(const OuterResult& result);

struct EfficiencyBoundInput {
  double lipschitz = 1.0;
  double f_gap = 0.0;   // f(u^k) - f*
  double alpha = 1.0;   // t = alpha / L
  double m_sq = 0.0;    // gradient variance bound
  std::int64_t iteration_limit = 1;
  std::int64_t batch_size = 1;
};

/// 2 L gap / ((2 alpha - alpha^2) N) + alpha M^2 / ((2 - alpha) m).
double efficiency_bound(const EfficiencyBoundInput& in);

struct EfficiencyBoundResult {
  double empirical_mean = 0.0;
  double bound = 0.0;
  double threshold = 0.0;  // bound * (1 + 3 / sqrt(runs))
  std::size_t runs = 0;
  bool pass = false;
};

/// `grad_norm_sq` holds ||grad f(u^{k+1})||^2 from independent runs.
EfficiencyBoundResult efficiency_bound_check(std::span<const double> grad_norm_sq,
                                             const EfficiencyBoundInput& in);

enum class RateClass { sublinear, linear, superlinear, undefined };
std::string to_string(RateClass c);

struct RateEstimate {
  double ratio = 0.0;  // median of successive ratios over the window
  RateClass classification = RateClass::undefined;
  std::vector<double> ratios;
};

/// Rate of the trailing `window` residuals. Superlinear when every ratio is
/// at most 0.9 of the previous one, linear when the median is below one, all
/// ratios lie within 10% of it and they are not strictly increasing,
/// sublinear otherwise. Nonpositive
/// residuals give `undefined`.
RateEstimate estimate_rate(std::span<const double> residuals, std::size_t window);

/// ||grad L_A(u^{k+1}, w^k; mu_k) - grad L(u^{k+1}, lambda^{k+1})||_G for a
/// logged outer iteration.
double lagrangian_identity_residual(const ProblemDefinition& problem, const RunRecord& record);

/// Outcome of one named property check.
struct CheckResult {
  std::string name;
  double worst = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string detail;
};

using ScalarFunction = std::function<double(const Point&)>;

/// Compares central differences of f along retraction curves with
/// g_u(grad, v), for `coordinate_dirs` coordinate directions and
/// `random_dirs` Gaussian ones. The error of each direction is measured
/// relative to max(|g(grad, v)|, ||grad|| ||v||), so it stays meaningful
/// when the directional derivative is close to zero.
double gradient_fd_error(const Manifold& m, const Point& u, const ScalarFunction& f,
                         const TangentVector& grad, RngStream& rng, int coordinate_dirs,
                         int random_dirs, double h = 1e-6);

/// Projection, distance and cone-membership identities on random vectors.
/// The distance derivative check skips points within 1e-3 of a kink.
std::vector<CheckResult> check_cone_properties(const ConePartition& p, RngStream& rng,
                                               int points);

struct VerifyOptions {
  int points = 20;
  double fd_tolerance = 1e-6;
  double identity_tolerance = 1e-10;
  double kkt_tolerance = 1e-8;
  int cone_points = 1000;
  /// Size of the random displacement from the initial point.
  double spread = 1.0;
};

/// Gradient harness, Lagrangian identity and cone suite for a problem.
std::vector<CheckResult> verify_problem(const ProblemDefinition& problem, std::uint64_t seed,
                                        const VerifyOptions& options = {});

}  // namespace salm
