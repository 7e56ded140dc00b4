#include "salm/inner_rsg.hpp"

#include <cmath>
#include <string>

#include "salm/errors.hpp"

namespace salm {

void InnerLoopParams::validate() const {
  if (!(step_size > 0.0) || !std::isfinite(step_size)) {
    throw ParameterError("step size must be positive and finite");
  }
  if (iteration_limit < 1) throw ParameterError("iteration limit must be at least 1");
  if (batch_size < 1) throw ParameterError("batch size must be at least 1");
}

std::pair<Point, StepRecord> rsg_step(const Manifold& manifold, const StochasticObjective& obj,
                                      const Point& z, double t, std::size_t m,
                                      const RngStream& stream, const StepTransform& transform) {
  if (!(t > 0.0)) throw ParameterError("step size must be positive");
  const ObjectiveSample est = batch_gradient(obj, z, m, stream);
  if (!est.gradient.components.allFinite() || !std::isfinite(est.value)) {
    throw NumericalError("non-finite stochastic gradient at inner step (k=" +
                         std::to_string(stream.path().k) + ", j=" +
                         std::to_string(stream.path().j) + ")");
  }
  StepRecord record;
  record.objective_estimate = est.value;
  record.gradient_norm_estimate = metric_norm(manifold, z, est.gradient);

  Vector direction = -est.gradient.components;
  if (transform) direction = transform(z, direction);

  double scale = t;
  for (int halvings = 0;; ++halvings) {
    try {
      Point next = manifold.retraction(z, scale * direction);
      record.halvings = halvings;
      const Vector step = scale * direction;
      record.step_norm = std::sqrt(std::max(0.0, manifold.inner(z, step, step)));
      return {std::move(next), record};
    } catch (const StepRejected&) {
      if (halvings >= kMaxStepHalvings) throw;
      scale *= 0.5;
    }
  }
}

RngStream stopping_stream(const RngStream& iteration_stream) {
  return iteration_stream.at({iteration_stream.path().k, 0, 0});
}

InnerLoopResult run_inner_steps(const Manifold& manifold, const StochasticObjective& obj,
                                const Point& u_k, const InnerLoopParams& params,
                                std::int64_t stopping_index, const RngStream& iteration_stream,
                                const StepTransform& transform) {
  params.validate();
  if (stopping_index < 1 || stopping_index > params.iteration_limit) {
    throw ParameterError("stopping index outside {1..N_k}");
  }
  InnerLoopResult out;
  out.stopping_index = stopping_index;
  out.steps.reserve(static_cast<std::size_t>(stopping_index));
  const std::uint64_t k = iteration_stream.path().k;
  Point z = u_k;
  for (std::int64_t j = 1; j <= stopping_index; ++j) {
    const RngStream step_stream = iteration_stream.at({k, static_cast<std::uint64_t>(j), 0});
    auto [next, record] = rsg_step(manifold, obj, z, params.step_size,
                                   static_cast<std::size_t>(params.batch_size), step_stream,
                                   transform);
    z = std::move(next);
    out.steps.push_back(record);
    out.samples_used += params.batch_size;
  }
  out.u_next = std::move(z);
  return out;
}

InnerLoopResult run_inner(const Manifold& manifold, const StochasticObjective& obj,
                          const Point& u_k, const InnerLoopParams& params,
                          const RngStream& iteration_stream, const StepTransform& transform) {
  params.validate();
  RngStream rs = stopping_stream(iteration_stream);
  const std::int64_t r = draw_stopping(params.iteration_limit, rs);
  return run_inner_steps(manifold, obj, u_k, params, r, iteration_stream, transform);
}

}  // namespace salm
