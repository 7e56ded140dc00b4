#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "salm/problem.hpp"

namespace salm {

/// gamma > 1, tau in (0,1), safeguarding box B, mu_1 > 0 and lambda_1.
struct AlParams {
  double gamma = 10.0;
  double tau = 0.9;
  double box_lower = -100.0;
  double box_upper = 100.0;
  double mu1 = 10.0;
  /// Initial multiplier; empty means zero.
  Vector lambda1;

  void validate() const;
  Box box(std::size_t n) const { return Box::uniform(n, box_lower, box_upper); }
};

/// How N_k and m_k grow between outer iterations: 1/T_k = sqrt(k) or 1.
enum class ScheduleGrowth { inverse_sqrt, constant };

/// How t_k is chosen: alpha / L_k from the problem's Lipschitz estimate,
/// step_scale / mu_k, or a constant.
enum class StepRule { lipschitz, inverse_penalty, constant };

struct ScheduleParams {
  std::int64_t n1 = 5;
  std::int64_t m1 = 25;
  ScheduleGrowth growth = ScheduleGrowth::inverse_sqrt;
  StepRule step_rule = StepRule::inverse_penalty;
  double alpha = 1.0;
  double step_scale = 20.0;
  double constant_step = 1.0;

  void validate() const;
};

struct ScheduleState {
  std::int64_t iteration_limit = 5;
  std::int64_t batch_size = 25;

  friend bool operator==(const ScheduleState&, const ScheduleState&) = default;
};

struct Termination {
  double r_tol = 1e-4;
  int k_max = 12;
  /// Total number of objective samples the run may draw.
  std::int64_t sample_budget = 1'000'000;

  void validate() const;
};

/// Log of one outer iteration k.
struct RunRecord {
  int k = 0;
  std::int64_t stopping_index = 0;     // R_k
  std::int64_t cum_inner_steps = 0;
  std::int64_t iteration_limit = 0;    // N_k
  std::int64_t batch_size = 0;         // m_k
  double step_size = 0.0;              // t_k
  double mu = 0.0;                     // mu_k, used in this inner loop
  double mu_next = 0.0;                // mu_{k+1}
  double feasibility = 0.0;            // H_{k+1} = H(u^{k+1}, w^k; mu_k)
  double optimality_estimate = 0.0;    // r_hat at (u^{k+1}, lambda^{k+1})
  double objective_estimate = 0.0;     // batch mean of J at u^{k+1}, from the r_hat batch
  double gradient_norm_estimate = 0.0; // ||grad L_A|| batch estimate at the last inner step
  std::int64_t samples_used = 0;       // cumulative
  double wall_ms = 0.0;
  Vector w;                            // w^k
  Vector lambda_next;                  // lambda^{k+1}
  Point u_next;                        // u^{k+1}
  std::vector<StepRecord> steps;
};

enum class StopReason { converged, max_iterations, budget_exhausted, numerical_abort };

std::string to_string(StopReason reason);

struct OuterResult {
  Point u;
  Vector lambda;
  double mu = 0.0;
  std::vector<RunRecord> records;
  StopReason reason = StopReason::max_iterations;
  std::string abort_message;
  std::int64_t samples_used = 0;
};

/// mu unchanged if H_next <= tau * H_curr or k == 1, gamma * mu otherwise.
double penalty_update(double h_next, double h_curr, double mu, int k, const AlParams& params);

/// N_k and m_k for iteration k >= 2 from those of iteration k - 1:
/// N_k = ceil(gamma N_{k-1} / T_k) if mu increased, ceil(N_{k-1} / T_k)
/// otherwise, and m_k = ceil(m_{k-1} / T_k).
ScheduleState evolve_schedule(const ScheduleState& s, int k, bool mu_increased, double gamma,
                              ScheduleGrowth growth);

/// t_k for penalty mu under the configured rule.
double choose_step_size(const ScheduleParams& schedule, const ProblemDefinition& problem,
                        double mu);

/// F_k(u, xi) = L_A(u, w, xi; mu): the stochastic objective of one inner loop.
/// The deterministic penalty part is evaluated once per batch.
class AugmentedObjective final : public StochasticObjective {
 public:
  AugmentedObjective(StochasticObjectivePtr objective, ConstraintSystemPtr constraints, Vector w,
                     double mu);

  ObjectiveSample sample(const Point& u, RngStream& rng) const override;
  ObjectiveSample batch_mean(const Point& u, std::size_t m, const RngStream& stream) const override;
  std::optional<ObjectiveSample> expectation(const Point& u) const override;

 private:
  ObjectiveSample add_penalty(const Point& u, ObjectiveSample base) const;

  StochasticObjectivePtr objective_;
  ConstraintSystemPtr constraints_;
  Vector w_;
  double mu_;
};

/// Called after every outer iteration with the record just produced.
using RunObserver = std::function<void(const RunRecord&)>;

/// Safeguarded stochastic augmented Lagrangian outer loop.
///
/// Each iteration: w = pi_B(lambda), draw R_k, run the inner loop, update the
/// multiplier, then the penalty, then the schedule. Stops on r_hat <= r_tol,
/// k == k_max, or when the next inner loop would exceed the sample budget.
/// Errors inside an iteration end the run with StopReason::numerical_abort and
/// keep the records produced so far.
OuterResult run_outer(const ProblemDefinition& problem, const AlParams& params,
                      const ScheduleParams& schedule, const Termination& termination,
                      std::uint64_t root_seed, const RunObserver& observer = {});

}  // namespace salm
