#include "salm/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "salm/auglag.hpp"
#include "salm/cone.hpp"
#include "salm/errors.hpp"

namespace salm {

bool KktReport::is_kkt(double tol) const {
  return stationarity_norm <= tol && feasibility_norm <= tol && complementarity_max <= tol &&
         dual_violation_max <= tol;
}

namespace {

TangentVector exact_gradient(const ProblemDefinition& problem, const Point& u,
                             const std::optional<TangentVector>& j_grad) {
  if (j_grad) return *j_grad;
  auto e = problem.objective->expectation(u);
  if (!e) throw ParameterError("objective has no exact gradient; supply one");
  return e->gradient;
}

// Largest max(0, -lambda_i) over inequality indices; multipliers of h <= 0
// must be nonnegative.
double dual_violation(const Vector& lambda, const ConePartition& p) {
  double worst = 0.0;
  for (std::size_t i : p.inequality_set()) {
    worst = std::max(worst, -lambda[static_cast<Eigen::Index>(i)]);
  }
  return worst;
}

}  // namespace

KktReport kkt_check(const ProblemDefinition& problem, const Point& u, const Vector& lambda,
                    const std::optional<TangentVector>& j_grad) {
  const ConstraintSystem& c = *problem.constraints;
  if (static_cast<std::size_t>(lambda.size()) != c.size()) {
    throw DimensionError("multiplier length does not match the constraint count");
  }
  const TangentVector g = exact_gradient(problem, u, j_grad);
  const ConstraintVector h = c.value(u);
  KktReport r;
  r.stationarity_norm = metric_norm(*problem.manifold, u, lagrangian_gradient(g, c, u, lambda));
  r.feasibility_norm = cone_distance(h, c.partition());
  for (std::size_t i : c.partition().inequality_set()) {
    const auto ii = static_cast<Eigen::Index>(i);
    r.complementarity_max = std::max(r.complementarity_max, std::abs(lambda[ii] * h[ii]));
  }
  r.dual_violation_max = dual_violation(lambda, c.partition());
  return r;
}

std::vector<AkktResidual> akkt_residuals(const ProblemDefinition& problem,
                                         std::span<const Iterate> trajectory) {
  if (trajectory.empty()) throw ParameterError("trajectory is empty");
  const ConstraintSystem& c = *problem.constraints;
  std::vector<AkktResidual> out;
  out.reserve(trajectory.size());
  for (const Iterate& it : trajectory) {
    const TangentVector g = exact_gradient(problem, it.u, std::nullopt);
    const ConstraintVector h = c.value(it.u);
    AkktResidual r;
    r.stationarity =
        metric_norm(*problem.manifold, it.u, lagrangian_gradient(g, c, it.u, it.lambda));
    r.complementarity = std::abs(project_onto_cone(-h, c.partition()).dot(it.lambda));
    double v = 0.0;
    for (std::size_t i : c.partition().inequality_set()) {
      const double l = it.lambda[static_cast<Eigen::Index>(i)];
      if (l < 0.0) v += l * l;
    }
    r.dual_violation = std::sqrt(v);
    out.push_back(r);
  }
  return out;
}

std::vector<Iterate> trajectory_of(const OuterResult& result) {
  std::vector<Iterate> out;
  for (const RunRecord& r : result.records) out.push_back({r.u_next, r.lambda_next});
  return out;
}

double efficiency_bound(const EfficiencyBoundInput& in) {
  if (!(in.alpha > 0.0 && in.alpha < 2.0)) throw ParameterError("alpha must lie in (0, 2)");
  if (!(in.lipschitz > 0.0)) throw ParameterError("Lipschitz constant must be positive");
  if (!(in.f_gap >= 0.0) || !(in.m_sq >= 0.0)) {
    throw ParameterError("gap and variance bound must be nonnegative");
  }
  if (in.iteration_limit < 1 || in.batch_size < 1) {
    throw ParameterError("iteration limit and batch size must be positive");
  }
  const double a = in.alpha;
  return 2.0 * in.lipschitz * in.f_gap / ((2.0 * a - a * a) * static_cast<double>(in.iteration_limit)) +
         a * in.m_sq / ((2.0 - a) * static_cast<double>(in.batch_size));
}

EfficiencyBoundResult efficiency_bound_check(std::span<const double> grad_norm_sq,
                                             const EfficiencyBoundInput& in) {
  if (grad_norm_sq.empty()) throw ParameterError("no runs supplied");
  EfficiencyBoundResult r;
  r.runs = grad_norm_sq.size();
  double sum = 0.0;
  for (double g : grad_norm_sq) sum += g;
  r.empirical_mean = sum / static_cast<double>(r.runs);
  r.bound = efficiency_bound(in);
  r.threshold = r.bound * (1.0 + 3.0 / std::sqrt(static_cast<double>(r.runs)));
  r.pass = r.empirical_mean <= r.threshold;
  return r;
}

std::string to_string(RateClass c) {
  switch (c) {
    case RateClass::sublinear: return "sublinear";
    case RateClass::linear: return "linear";
    case RateClass::superlinear: return "superlinear";
    case RateClass::undefined: return "undefined";
  }
  return "undefined";
}

RateEstimate estimate_rate(std::span<const double> residuals, std::size_t window) {
  if (window < 3) throw ParameterError("rate window must be at least 3");
  if (residuals.size() < window) throw ParameterError("fewer residuals than the window");
  const auto tail = residuals.subspan(residuals.size() - window);
  RateEstimate est;
  for (double r : tail) {
    if (!(r > 0.0) || !std::isfinite(r)) return est;
  }
  for (std::size_t i = 1; i < tail.size(); ++i) est.ratios.push_back(tail[i] / tail[i - 1]);
  std::vector<double> sorted = est.ratios;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  est.ratio = n % 2 == 1 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);

  bool shrinking = true;
  for (std::size_t i = 1; i < n; ++i) shrinking = shrinking && est.ratios[i] <= 0.9 * est.ratios[i - 1];
  bool degrading = true;
  for (std::size_t i = 1; i < n; ++i) degrading = degrading && est.ratios[i] > est.ratios[i - 1];
  bool banded = est.ratio < 1.0 && !degrading;
  for (double q : est.ratios) banded = banded && std::abs(q - est.ratio) <= 0.1 * est.ratio;
  est.classification =
      shrinking ? RateClass::superlinear : banded ? RateClass::linear : RateClass::sublinear;
  return est;
}

double lagrangian_identity_residual(const ProblemDefinition& problem, const RunRecord& record) {
  const ConstraintSystem& c = *problem.constraints;
  // grad j enters both sides identically, so a zero vector stands in for it.
  const TangentVector zero = TangentVector::zero(record.u_next);
  const TangentVector a = auglag_gradient(zero, c, record.u_next, record.w, record.mu);
  const TangentVector b = lagrangian_gradient(zero, c, record.u_next, record.lambda_next);
  return metric_norm(*problem.manifold, record.u_next,
                     {record.u_next, a.components - b.components});
}

double gradient_fd_error(const Manifold& m, const Point& u, const ScalarFunction& f,
                         const TangentVector& grad, RngStream& rng, int coordinate_dirs,
                         int random_dirs, double h) {
  const auto dim = static_cast<Eigen::Index>(m.dimension());
  const double gnorm = metric_norm(m, u, grad);
  double worst = 0.0;
  auto check = [&](const Vector& dir) {
    const TangentVector v{u, dir};
    const double analytic = metric_inner(m, u, grad, v);
    const double fd = (f(m.retraction(u, h * dir)) - f(m.retraction(u, -h * dir))) / (2.0 * h);
    const double scale = std::max({std::abs(analytic), gnorm * metric_norm(m, u, v), 1e-300});
    worst = std::max(worst, std::abs(fd - analytic) / scale);
  };
  const int coords = std::min<int>(coordinate_dirs, static_cast<int>(dim));
  for (int c = 0; c < coords; ++c) {
    Vector e = Vector::Zero(dim);
    e[static_cast<Eigen::Index>(c) * dim / coords] = 1.0;
    check(e);
  }
  for (int r = 0; r < random_dirs; ++r) {
    Vector e(dim);
    for (auto& x : e) x = rng.normal();
    check(e);
  }
  return worst;
}

namespace {

CheckResult make_check(std::string name, double worst, double tol, std::string detail = {}) {
  return {std::move(name), worst, tol, worst <= tol, std::move(detail)};
}

}  // namespace

std::vector<CheckResult> check_cone_properties(const ConePartition& p, RngStream& rng,
                                               int points) {
  const auto n = static_cast<Eigen::Index>(p.size());
  double idempotence = 0.0;
  double membership = 0.0;
  double normal = 0.0;
  double orthogonal = 0.0;
  double gradient = 0.0;
  int normal_failures = 0;
  int gradient_points = 0;
  for (int t = 0; t < points; ++t) {
    ConstraintVector v(n);
    for (auto& x : v) x = 2.0 * rng.normal();
    const ConstraintVector pv = project_onto_cone(v, p);
    idempotence = std::max(idempotence, (project_onto_cone(pv, p) - pv).lpNorm<Eigen::Infinity>());
    membership = std::max(membership, cone_distance(pv, p));
    const ConstraintVector r = v - pv;
    if (!in_normal_cone(r, pv, p)) ++normal_failures;
    orthogonal = std::max(orthogonal, std::abs(r.dot(pv)));
    normal = std::max(normal, std::abs(cone_distance(v, p) - r.norm()));

    bool near_kink = false;
    for (std::size_t i : p.inequality_set()) {
      near_kink = near_kink || std::abs(v[static_cast<Eigen::Index>(i)]) < 1e-3;
    }
    if (near_kink || n == 0) continue;
    ++gradient_points;
    const Vector analytic = 2.0 * r;
    const double h = 1e-6;
    Vector fd(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      ConstraintVector a = v;
      ConstraintVector b = v;
      a[i] += h;
      b[i] -= h;
      const double da = cone_distance(a, p);
      const double db = cone_distance(b, p);
      fd[i] = (da * da - db * db) / (2.0 * h);
    }
    gradient = std::max(gradient, (fd - analytic).norm() / std::max(1.0, analytic.norm()));
  }
  std::vector<CheckResult> out;
  out.push_back(make_check("cone.projection_idempotent", idempotence, 1e-15));
  out.push_back(make_check("cone.projection_in_cone", membership, 1e-15));
  out.push_back(make_check("cone.distance_matches_residual", normal, 1e-12));
  out.push_back(make_check("cone.residual_orthogonal", orthogonal, 1e-12));
  out.push_back(make_check("cone.residual_in_normal_cone", normal_failures, 0.0));
  out.push_back(make_check("cone.dist_sq_gradient", gradient, 1e-6,
                           std::to_string(gradient_points) + " points away from kinks"));
  return out;
}

namespace {

// Random point near the initial point, shrinking the displacement until the
// retraction accepts it.
Point random_point(const ProblemDefinition& problem, RngStream& rng, double spread) {
  const Manifold& m = *problem.manifold;
  Vector dir(static_cast<Eigen::Index>(m.dimension()));
  for (auto& x : dir) x = rng.normal();
  double scale = spread;
  for (int attempt = 0; attempt < 30; ++attempt, scale *= 0.5) {
    try {
      return m.retraction(problem.initial_point, scale * dir);
    } catch (const StepRejected&) {
    }
  }
  return problem.initial_point;
}

}  // namespace

std::vector<CheckResult> verify_problem(const ProblemDefinition& problem, std::uint64_t seed,
                                        const VerifyOptions& options) {
  problem.validate();
  const Manifold& m = *problem.manifold;
  const ConstraintSystem& c = *problem.constraints;
  const ConePartition& p = c.partition();
  RngStream rng(seed, {0, 0, 0});
  const int coords = 4;
  const int dirs = 4;

  double sample_err = 0.0;
  double mean_err = 0.0;
  double constraint_err = 0.0;
  double auglag_err = 0.0;
  double identity_err = 0.0;
  bool has_expectation = true;
  for (int t = 0; t < options.points; ++t) {
    const Point u = random_point(problem, rng, options.spread);
    const RngStream sample_stream = rng.at({1, static_cast<std::uint64_t>(t), 0});
    auto sample_at = [&](const Point& x) {
      RngStream s = sample_stream;
      return problem.objective->sample(x, s);
    };
    const ObjectiveSample s0 = sample_at(u);
    sample_err = std::max(sample_err, gradient_fd_error(m, u, [&](const Point& x) { return sample_at(x).value; },
                                                        s0.gradient, rng, coords, dirs));
    if (auto e = problem.objective->expectation(u)) {
      mean_err = std::max(
          mean_err, gradient_fd_error(m, u,
                                      [&](const Point& x) { return problem.objective->expectation(x)->value; },
                                      e->gradient, rng, coords, dirs));
    } else {
      has_expectation = false;
    }
    const std::vector<TangentVector> hg = c.gradient(u);
    for (std::size_t i = 0; i < c.size(); ++i) {
      const auto ii = static_cast<Eigen::Index>(i);
      constraint_err = std::max(
          constraint_err,
          gradient_fd_error(m, u, [&](const Point& x) { return c.value(x)[ii]; }, hg[i], rng, coords, dirs));
    }

    Vector w(static_cast<Eigen::Index>(c.size()));
    for (auto& x : w) x = 2.0 * rng.normal();
    const double mu = 1.0 + 99.0 * rng.uniform();
    const AugmentedObjective al(problem.objective, problem.constraints, w, mu);
    auto al_at = [&](const Point& x) {
      RngStream s = sample_stream;
      return al.sample(x, s);
    };
    auglag_err = std::max(auglag_err, gradient_fd_error(m, u, [&](const Point& x) { return al_at(x).value; },
                                                        al_at(u).gradient, rng, coords, dirs));

    const ConstraintVector h = c.value(u);
    const Vector lambda_next = multiplier_update(h, w, mu, p);
    const TangentVector a = auglag_gradient(s0.gradient, c, u, w, mu);
    const TangentVector b = lagrangian_gradient(s0.gradient, hg, lambda_next);
    const double scale = std::max(1.0, metric_norm(m, u, a));
    identity_err = std::max(identity_err,
                            metric_norm(m, u, {u, a.components - b.components}) / scale);
  }

  std::vector<CheckResult> out;
  out.push_back(make_check("objective.sample_gradient_fd", sample_err, options.fd_tolerance));
  if (has_expectation) {
    out.push_back(make_check("objective.mean_gradient_fd", mean_err, options.fd_tolerance));
  }
  out.push_back(make_check("constraints.gradient_fd", constraint_err, options.fd_tolerance));
  out.push_back(make_check("auglag.gradient_fd", auglag_err, options.fd_tolerance));
  out.push_back(make_check("auglag.lagrangian_identity", identity_err, options.identity_tolerance));

  if (problem.known_solution && has_expectation) {
    const KnownSolution& ks = *problem.known_solution;
    const KktReport r = kkt_check(problem, ks.u, ks.lambda);
    const double worst = std::max({r.stationarity_norm, r.feasibility_norm, r.complementarity_max,
                                   r.dual_violation_max});
    const Vector g = problem.objective->expectation(ks.u)->gradient.components;
    const double rr = optimality_r(m, {ks.u, g}, c, ks.u, ks.lambda);
    out.push_back(make_check("known_solution.kkt", worst, options.kkt_tolerance));
    out.push_back(make_check("known_solution.optimality_r", rr, options.kkt_tolerance));
  }

  RngStream cone_rng = rng.at({2, 0, 0});
  for (CheckResult& r : check_cone_properties(p, cone_rng, options.cone_points)) {
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace salm
