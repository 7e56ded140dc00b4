#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "salm/stochastic.hpp"

namespace salm {

/// Step size t_k, iteration limit N_k and batch size m_k of one inner loop.
struct InnerLoopParams {
  double step_size = 1.0;
  std::int64_t iteration_limit = 1;
  std::int64_t batch_size = 1;

  void validate() const;
};

struct StepRecord {
  double objective_estimate = 0.0;
  /// ||g||_G of the batch-mean gradient at the step's base point.
  double gradient_norm_estimate = 0.0;
  /// ||t g||_G of the step actually taken.
  double step_norm = 0.0;
  /// Number of times the step was halved after a rejected retraction.
  int halvings = 0;
};

struct InnerLoopResult {
  Point u_next;
  std::int64_t stopping_index = 0;
  std::vector<StepRecord> steps;
  std::int64_t samples_used = 0;
};

/// Optional map applied to the descent direction before retracting, e.g. a
/// projection of curve displacements onto normals.
using StepTransform = std::function<Vector(const Point&, const Vector&)>;

inline constexpr int kMaxStepHalvings = 20;

/// One step z+ = R_z(-t * mean of m gradient draws). Draws come from
/// stream.substream(1..m). A rejected retraction is retried with half the step
/// up to kMaxStepHalvings times before the StepRejected error propagates.
std::pair<Point, StepRecord> rsg_step(const Manifold& manifold, const StochasticObjective& obj,
                                      const Point& z, double t, std::size_t m,
                                      const RngStream& stream,
                                      const StepTransform& transform = {});

/// Runs exactly `stopping_index` steps from u_k. Step j uses the stream at
/// path (k, j, .) where k is taken from `iteration_stream`.
InnerLoopResult run_inner_steps(const Manifold& manifold, const StochasticObjective& obj,
                                const Point& u_k, const InnerLoopParams& params,
                                std::int64_t stopping_index, const RngStream& iteration_stream,
                                const StepTransform& transform = {});

/// Draws R_k uniformly from {1..N_k} at path (k, 0, 0) and runs R_k steps.
InnerLoopResult run_inner(const Manifold& manifold, const StochasticObjective& obj,
                          const Point& u_k, const InnerLoopParams& params,
                          const RngStream& iteration_stream, const StepTransform& transform = {});

/// Stream for R_k at outer iteration k.
RngStream stopping_stream(const RngStream& iteration_stream);

}  // namespace salm
