#include "salm/outer_auglag.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "salm/auglag.hpp"
#include "salm/errors.hpp"

namespace salm {

namespace {

// N_k and m_k saturate here; the sample budget stops a run long before.
constexpr double kScheduleCap = 9007199254740992.0;  // 2^53

std::int64_t ceil_capped(double x) {
  return static_cast<std::int64_t>(std::min(std::ceil(x), kScheduleCap));
}

std::int64_t saturating_mul(std::int64_t a, std::int64_t b) {
  if (a != 0 && b > std::numeric_limits<std::int64_t>::max() / a) {
    return std::numeric_limits<std::int64_t>::max();
  }
  return a * b;
}

}  // namespace

void AlParams::validate() const {
  if (!(gamma > 1.0)) throw ParameterError("gamma must be > 1");
  if (!(tau > 0.0 && tau < 1.0)) throw ParameterError("tau must lie in (0, 1)");
  if (!(mu1 > 0.0)) throw ParameterError("mu1 must be positive");
  if (!(box_lower <= box_upper)) throw ParameterError("safeguarding box has lower > upper");
}

void ScheduleParams::validate() const {
  if (n1 < 1) throw ParameterError("N1 must be at least 1");
  if (m1 < 1) throw ParameterError("m1 must be at least 1");
  if (!(alpha > 0.0 && alpha < 2.0)) throw ParameterError("alpha must lie in (0, 2)");
  if (!(step_scale > 0.0)) throw ParameterError("step_scale must be positive");
  if (!(constant_step > 0.0)) throw ParameterError("constant step must be positive");
}

void Termination::validate() const {
  if (!(r_tol >= 0.0)) throw ParameterError("r_tol must be nonnegative");
  if (k_max < 1) throw ParameterError("k_max must be at least 1");
  if (sample_budget < 1) throw ParameterError("sample budget must be positive");
}

std::string to_string(StopReason reason) {
  switch (reason) {
    case StopReason::converged:
      return "converged";
    case StopReason::max_iterations:
      return "max_iterations";
    case StopReason::budget_exhausted:
      return "budget_exhausted";
    case StopReason::numerical_abort:
      return "numerical_abort";
  }
  return "unknown";
}

AugmentedObjective::AugmentedObjective(StochasticObjectivePtr objective,
                                       ConstraintSystemPtr constraints, Vector w, double mu)
    : objective_(std::move(objective)),
      constraints_(std::move(constraints)),
      w_(std::move(w)),
      mu_(mu) {
  if (!(mu_ > 0.0)) throw ParameterError("penalty parameter must be positive");
  if (static_cast<std::size_t>(w_.size()) != constraints_->size()) {
    throw DimensionError("multiplier proxy length does not match the constraint count");
  }
}

ObjectiveSample AugmentedObjective::add_penalty(const Point& u, ObjectiveSample base) const {
  if (constraints_->size() == 0) return base;
  const ConstraintVector h = constraints_->value(u);
  const ConePartition& p = constraints_->partition();
  base.value = stochastic_auglag_value(base.value, h, w_, mu_, p);
  base.gradient.components +=
      auglag_penalty_gradient(h, constraints_->gradient(u), w_, mu_, p).components;
  return base;
}

ObjectiveSample AugmentedObjective::sample(const Point& u, RngStream& rng) const {
  return add_penalty(u, objective_->sample(u, rng));
}

ObjectiveSample AugmentedObjective::batch_mean(const Point& u, std::size_t m,
                                               const RngStream& stream) const {
  return add_penalty(u, objective_->batch_mean(u, m, stream));
}

std::optional<ObjectiveSample> AugmentedObjective::expectation(const Point& u) const {
  auto base = objective_->expectation(u);
  if (!base) return std::nullopt;
  return add_penalty(u, std::move(*base));
}

double penalty_update(double h_next, double h_curr, double mu, int k, const AlParams& params) {
  if (!(mu > 0.0)) throw ParameterError("penalty parameter must be positive");
  if (k == 1 || h_next <= params.tau * h_curr) return mu;
  return params.gamma * mu;
}

ScheduleState evolve_schedule(const ScheduleState& s, int k, bool mu_increased, double gamma,
                              ScheduleGrowth growth) {
  if (k < 2) throw ParameterError("schedule evolves from iteration 2 on");
  // 1 / T_k
  const double factor = growth == ScheduleGrowth::inverse_sqrt ? std::sqrt(static_cast<double>(k))
                                                                : 1.0;
  ScheduleState next;
  const double n_prev = static_cast<double>(s.iteration_limit);
  next.iteration_limit = ceil_capped((mu_increased ? gamma * n_prev : n_prev) * factor);
  next.batch_size = ceil_capped(static_cast<double>(s.batch_size) * factor);
  return next;
}

double choose_step_size(const ScheduleParams& schedule, const ProblemDefinition& problem,
                        double mu) {
  switch (schedule.step_rule) {
    case StepRule::lipschitz: {
      if (!problem.lipschitz) {
        throw ParameterError("problem '" + problem.name + "' provides no Lipschitz estimate");
      }
      const double l = problem.lipschitz(mu);
      if (!(l > 0.0)) throw NumericalError("Lipschitz estimate must be positive");
      return schedule.alpha / l;
    }
    case StepRule::inverse_penalty:
      return schedule.step_scale / mu;
    case StepRule::constant:
      return schedule.constant_step;
  }
  throw ParameterError("unknown step rule");
}

OuterResult run_outer(const ProblemDefinition& problem, const AlParams& params,
                      const ScheduleParams& schedule, const Termination& termination,
                      std::uint64_t root_seed, const RunObserver& observer) {
  problem.validate();
  params.validate();
  schedule.validate();
  termination.validate();

  const Manifold& manifold = *problem.manifold;
  const ConstraintSystem& constraints = *problem.constraints;
  const std::size_t n = constraints.size();
  const Box box = params.box(n);

  OuterResult result;
  result.u = problem.initial_point;
  result.lambda = params.lambda1.size() == 0 ? Vector::Zero(static_cast<Eigen::Index>(n))
                                             : params.lambda1;
  if (static_cast<std::size_t>(result.lambda.size()) != n) {
    throw DimensionError("initial multiplier length does not match the constraint count");
  }
  result.mu = params.mu1;

  ScheduleState sched{schedule.n1, schedule.m1};
  double h_curr = std::numeric_limits<double>::quiet_NaN();
  std::int64_t cum_steps = 0;
  const RngStream root(root_seed);

  for (int k = 1;; ++k) {
    const auto t0 = std::chrono::steady_clock::now();
    RunRecord rec;
    rec.k = k;
    rec.mu = result.mu;
    rec.iteration_limit = sched.iteration_limit;
    rec.batch_size = sched.batch_size;
    try {
      rec.w = safeguard(result.lambda, box);
      rec.step_size = choose_step_size(schedule, problem, result.mu);
      const InnerLoopParams inner{rec.step_size, sched.iteration_limit, sched.batch_size};

      const RngStream iteration_stream = root.at({static_cast<std::uint64_t>(k), 0, 0});
      RngStream rs = stopping_stream(iteration_stream);
      rec.stopping_index = draw_stopping(sched.iteration_limit, rs);

      const std::int64_t planned =
          saturating_mul(rec.stopping_index + 1, sched.batch_size);  // inner steps + r_hat batch
      if (planned > termination.sample_budget - result.samples_used) {
        result.reason = StopReason::budget_exhausted;
        return result;
      }

      const AugmentedObjective f_k(problem.objective, problem.constraints, rec.w, result.mu);
      InnerLoopResult inner_result =
          run_inner_steps(manifold, f_k, result.u, inner, rec.stopping_index, iteration_stream,
                          problem.step_transform);
      result.samples_used += inner_result.samples_used;
      cum_steps += inner_result.stopping_index;

      const Point& u_next = inner_result.u_next;
      const ConstraintVector h_next = constraints.value(u_next);
      rec.lambda_next = multiplier_update(h_next, rec.w, result.mu, constraints.partition());
      rec.feasibility = feasibility_measure(h_next, rec.w, result.mu, constraints.partition());
      rec.mu_next = penalty_update(rec.feasibility, h_curr, result.mu, k, params);

      // r_hat with grad j replaced by a batch mean drawn at (k, 0, 1..m_k).
      const ObjectiveSample grad_est =
          batch_gradient(*problem.objective, u_next,
                         static_cast<std::size_t>(sched.batch_size), iteration_stream);
      result.samples_used += sched.batch_size;
      if (!grad_est.gradient.components.allFinite()) {
        throw NumericalError("non-finite gradient estimate for r_hat");
      }
      rec.optimality_estimate =
          optimality_r(manifold, grad_est.gradient, constraints, u_next, rec.lambda_next);

      rec.cum_inner_steps = cum_steps;
      rec.samples_used = result.samples_used;
      rec.objective_estimate = grad_est.value;
      rec.gradient_norm_estimate = inner_result.steps.back().gradient_norm_estimate;
      rec.u_next = u_next;
      rec.steps = std::move(inner_result.steps);
    } catch (const Error& e) {
      result.reason = StopReason::numerical_abort;
      result.abort_message = "outer iteration " + std::to_string(k) + ": " + e.what();
      return result;
    }
    rec.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

    result.u = rec.u_next;
    result.lambda = rec.lambda_next;
    const bool mu_increased = rec.mu_next > result.mu;
    result.mu = rec.mu_next;
    h_curr = rec.feasibility;
    result.records.push_back(std::move(rec));
    const RunRecord& last = result.records.back();
    if (observer) observer(last);

    if (last.optimality_estimate <= termination.r_tol) {
      result.reason = StopReason::converged;
      return result;
    }
    if (k >= termination.k_max) {
      result.reason = StopReason::max_iterations;
      return result;
    }
    sched = evolve_schedule(sched, k + 1, mu_increased, params.gamma, schedule.growth);
  }
}

}  // namespace salm
