#include "salm/outer_auglag.hpp"

#include <gtest/gtest.h>

#include "helpers.hpp"
#include "salm/errors.hpp"
#include "salm/problems.hpp"

namespace salm {
namespace {

using testing::vec;

TEST(PenaltyUpdate, Examples) {
  AlParams p;
  EXPECT_EQ(penalty_update(0.05, 0.1, 10, 3, p), 10);
  EXPECT_EQ(penalty_update(0.095, 0.1, 10, 3, p), 100);
  EXPECT_EQ(penalty_update(5.0, 0.1, 10, 1, p), 10);
  EXPECT_EQ(penalty_update(5.0, std::nan(""), 10, 1, p), 10);
  EXPECT_EQ(penalty_update(0.09, 0.1, 10, 2, p), 10);  // boundary: H_next == tau H_curr
  EXPECT_THROW(penalty_update(0.1, 0.1, 0, 2, p), ParameterError);
}

TEST(AlParams, Validation) {
  AlParams p;
  EXPECT_NO_THROW(p.validate());
  p.gamma = 1.0;
  EXPECT_THROW(p.validate(), ParameterError);
  p = {};
  p.tau = 1.0;
  EXPECT_THROW(p.validate(), ParameterError);
  p = {};
  p.mu1 = 0;
  EXPECT_THROW(p.validate(), ParameterError);
}

TEST(EvolveSchedule, Examples) {
  const ScheduleState s{5, 25};
  EXPECT_EQ(evolve_schedule(s, 2, true, 10, ScheduleGrowth::inverse_sqrt).iteration_limit, 71);
  EXPECT_EQ(evolve_schedule(s, 2, false, 10, ScheduleGrowth::inverse_sqrt).iteration_limit, 8);
  EXPECT_EQ(evolve_schedule(s, 2, false, 10, ScheduleGrowth::inverse_sqrt).batch_size, 36);
  EXPECT_EQ(evolve_schedule(s, 2, true, 10, ScheduleGrowth::constant),
            (ScheduleState{50, 25}));
  EXPECT_EQ(evolve_schedule(s, 5, false, 10, ScheduleGrowth::constant), s);
  EXPECT_THROW(evolve_schedule(s, 1, false, 10, ScheduleGrowth::inverse_sqrt), ParameterError);
}

TEST(EvolveSchedule, MonotoneAndSaturating) {
  ScheduleState s{5, 25};
  for (int k = 2; k < 200; ++k) {
    const ScheduleState next = evolve_schedule(s, k, k % 3 == 0, 10, ScheduleGrowth::inverse_sqrt);
    EXPECT_GE(next.iteration_limit, s.iteration_limit);
    EXPECT_GE(next.batch_size, s.batch_size);
    s = next;
  }
  EXPECT_EQ(s.iteration_limit, std::int64_t{1} << 53);
}

TEST(ChooseStepSize, Rules) {
  const ProblemDefinition q = quadratic_benchmark(1, 0.0);
  ScheduleParams s;
  s.step_rule = StepRule::inverse_penalty;
  EXPECT_EQ(choose_step_size(s, q, 10), 2.0);
  s.step_rule = StepRule::lipschitz;
  s.alpha = 1.5;
  EXPECT_EQ(choose_step_size(s, q, 10), 1.5 / 12.0);
  s.step_rule = StepRule::constant;
  s.constant_step = 0.25;
  EXPECT_EQ(choose_step_size(s, q, 10), 0.25);
  MultiShapeOptions o;
  o.num_curves = 1;
  o.nodes_per_curve = 16;
  s.step_rule = StepRule::lipschitz;
  EXPECT_THROW(choose_step_size(s, multishape_benchmark(o), 10), ParameterError);
}

TEST(AugmentedObjective, ExpectationAddsPenalty) {
  const ProblemDefinition q = quadratic_benchmark(2, 0.3);
  const AugmentedObjective f(q.objective, q.constraints, vec({1, 0}), 10);
  const Point u = vec({0.5, 2});
  const auto e = f.expectation(u);
  ASSERT_TRUE(e);
  // h = (0.5, -1); v = h + w/mu = (0.6, -1); penalty part of the gradient is mu (0.6, 0) . grad h.
  EXPECT_NEAR(e->gradient.components[0], 1.0 - 6.0, 1e-14);
  EXPECT_NEAR(e->gradient.components[1], 4.0, 1e-14);
  EXPECT_NEAR(e->value, 4.25 + 5 * 0.36 - 1.0 / 20, 1e-14);
}

TEST(AugmentedObjective, BatchMeanMatchesSamples) {
  const ProblemDefinition q = quadratic_benchmark(3, 0.3);
  const AugmentedObjective f(q.objective, q.constraints, vec({1, 2}), 7);
  const Point u = vec({0.5, 2, -1});
  const RngStream stream(3, {1, 2, 0});
  Vector sum = Vector::Zero(3);
  for (std::size_t s = 1; s <= 5; ++s) {
    RngStream rng = stream.substream(s);
    sum += f.sample(u, rng).gradient.components;
  }
  EXPECT_LE((f.batch_mean(u, 5, stream).gradient.components - sum / 5).norm(), 1e-13);
}

struct QuadraticRun {
  ProblemDefinition problem = quadratic_benchmark(1, 0.0);
  AlParams al;
  ScheduleParams schedule;
  Termination term;

  QuadraticRun() {
    schedule.step_rule = StepRule::lipschitz;
    schedule.growth = ScheduleGrowth::constant;
    schedule.n1 = 20;
    schedule.m1 = 1;
    term.r_tol = 1e-9;
    term.k_max = 50;
    term.sample_budget = 100000000;
  }
};

TEST(RunOuter, DeterministicOneDimensionalConverges) {
  QuadraticRun r;
  const OuterResult res = run_outer(r.problem, r.al, r.schedule, r.term, 964113);
  EXPECT_EQ(res.reason, StopReason::converged);
  EXPECT_LT(res.records.size(), 50u);
  EXPECT_NEAR(res.u[0], 1.0, 1e-6);
  EXPECT_NEAR(res.lambda[0], 2.0, 1e-5);
}

TEST(RunOuter, ProjectedGradientOracleAgrees) {
  // Projected gradient on min u^2 s.t. u >= 1 reaches the same point.
  double u = 0.0;
  for (int i = 0; i < 100; ++i) u = std::max(1.0, u - 0.25 * 2 * u);
  QuadraticRun r;
  const OuterResult res = run_outer(r.problem, r.al, r.schedule, r.term, 454612);
  EXPECT_NEAR(res.u[0], u, 1e-6);
}

TEST(RunOuter, Reproducible) {
  const ProblemDefinition q = quadratic_benchmark(3, 0.1);
  ScheduleParams s;
  s.step_rule = StepRule::lipschitz;
  Termination t;
  t.sample_budget = 200000;
  const OuterResult a = run_outer(q, {}, s, t, 421507);
  const OuterResult b = run_outer(q, {}, s, t, 421507);
  ASSERT_EQ(a.records.size(), b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    EXPECT_EQ(a.records[i].stopping_index, b.records[i].stopping_index);
    EXPECT_EQ(a.records[i].u_next, b.records[i].u_next);
    EXPECT_EQ(a.records[i].optimality_estimate, b.records[i].optimality_estimate);
  }
  const OuterResult c = run_outer(q, {}, s, t, 421508);
  EXPECT_NE(a.u, c.u);
}

TEST(RunOuter, InvariantsAlongTrajectory) {
  const ProblemDefinition q = quadratic_benchmark(3, 0.1);
  AlParams al;
  ScheduleParams s;
  s.step_rule = StepRule::lipschitz;
  Termination t;
  t.k_max = 12;
  t.sample_budget = 500000;
  for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
    const OuterResult res = run_outer(q, al, s, t, seed);
    const Box box = al.box(2);
    for (std::size_t i = 0; i < res.records.size(); ++i) {
      const RunRecord& r = res.records[i];
      EXPECT_TRUE(box.contains(r.w));
      EXPECT_TRUE(r.mu_next == r.mu || r.mu_next == al.gamma * r.mu);
      EXPECT_GE(r.lambda_next.minCoeff(), 0.0);
      EXPECT_GE(r.stopping_index, 1);
      EXPECT_LE(r.stopping_index, r.iteration_limit);
      EXPECT_EQ(r.steps.size(), static_cast<std::size_t>(r.stopping_index));
      if (i > 0) {
        EXPECT_EQ(r.mu, res.records[i - 1].mu_next);
        if (r.mu_next == r.mu) EXPECT_LE(r.feasibility, al.tau * res.records[i - 1].feasibility);
      }
    }
  }
}

TEST(RunOuter, BudgetStopsBeforeOverrun) {
  const ProblemDefinition q = quadratic_benchmark(2, 0.1);
  ScheduleParams s;
  s.step_rule = StepRule::lipschitz;
  Termination t;
  t.sample_budget = 5000;
  const OuterResult res = run_outer(q, {}, s, t, 9);
  EXPECT_EQ(res.reason, StopReason::budget_exhausted);
  EXPECT_LE(res.samples_used, 5000);
  if (!res.records.empty()) EXPECT_EQ(res.records.back().samples_used, res.samples_used);
}

TEST(RunOuter, MaxIterations) {
  const ProblemDefinition q = quadratic_benchmark(2, 0.1);
  ScheduleParams s;
  s.step_rule = StepRule::lipschitz;
  s.growth = ScheduleGrowth::constant;
  Termination t;
  t.k_max = 3;
  t.r_tol = 0;
  const OuterResult res = run_outer(q, {}, s, t, 9);
  EXPECT_EQ(res.reason, StopReason::max_iterations);
  EXPECT_EQ(res.records.size(), 3u);
}

class ExplodingObjective final : public StochasticObjective {
 public:
  ObjectiveSample sample(const Point& u, RngStream&) const override {
    Vector g = 2 * u;
    if (u[0] > 0.5) g[0] = std::numeric_limits<double>::infinity();
    return {u.squaredNorm(), {u, g}};
  }
};

TEST(RunOuter, NumericalAbortKeepsRecords) {
  ProblemDefinition q = quadratic_benchmark(1, 0.0);
  q.objective = std::make_shared<ExplodingObjective>();
  ScheduleParams s;
  s.step_rule = StepRule::constant;
  s.constant_step = 0.01;
  s.growth = ScheduleGrowth::constant;
  s.n1 = 1;
  s.m1 = 1;
  Termination t;
  t.r_tol = 0;
  t.k_max = 10000;
  const OuterResult res = run_outer(q, {}, s, t, 1);
  EXPECT_EQ(res.reason, StopReason::numerical_abort);
  EXPECT_FALSE(res.records.empty());
  EXPECT_NE(res.abort_message.find("non-finite"), std::string::npos);
}

}  // namespace
}  // namespace salm
