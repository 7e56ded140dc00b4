#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "salm/manifold.hpp"

namespace salm {

/// Address of a random substream: outer iteration k, inner step j, sample s.
///
/// The solver reserves j = 0 for per-iteration draws (s = 0 is the stopping
/// index R_k, s >= 1 the samples of the optimality estimate); inner steps use
/// j = 1..R_k and samples s = 1..m_k.
struct StreamPath {
  std::uint64_t k = 0;
  std::uint64_t j = 0;
  std::uint64_t s = 0;

  friend bool operator==(const StreamPath&, const StreamPath&) = default;
};

/// Counter-based random stream keyed on (root_seed, k, j, s).
///
/// The key is a hash of the seed and path, and the stream is SplitMix64 run
/// from that key, so any substream can be created directly without advancing
/// others. Identical (seed, path) pairs reproduce identical draws regardless
/// of evaluation order. Satisfies UniformRandomBitGenerator.
class RngStream {
 public:
  using result_type = std::uint64_t;

  explicit RngStream(std::uint64_t root_seed, StreamPath path = {});

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();

  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  /// Standard normal draw.
  double normal();

  std::uint64_t root_seed() const { return root_seed_; }
  const StreamPath& path() const { return path_; }

  /// Fresh stream at another path under the same root seed.
  RngStream at(StreamPath path) const { return RngStream(root_seed_, path); }
  /// Fresh stream at (k, j, s) for the same k and j.
  RngStream substream(std::uint64_t s) const { return at({path_.k, path_.j, s}); }

 private:
  std::uint64_t root_seed_;
  StreamPath path_;
  std::uint64_t state_;
  std::normal_distribution<double> normal_;
};

/// Truncated Karhunen-Loeve expansion
///   kappa(x2, xi) = -4 x2 (x2 - 1) + sum_l l^(-eta - 1/2) sin(2 pi l (x2 - 1/2)) xi_l
/// with xi_l ~ U[-1/2, 1/2].
struct KLField {
  int num_terms = 100;
  double eta = 3.5;

  void validate() const;
  /// Weight l^(-eta - 1/2) of term l (1-based).
  double coefficient(int l) const;
  /// Mean profile -4 x2 (x2 - 1).
  static double mean_profile(double x2);
  /// Values coefficient(l) * sin(2 pi l (x2 - 1/2)) for l = 1..num_terms.
  Vector basis(double x2) const;
  /// Var[kappa(x2, xi)] = (1/12) sum_l basis_l(x2)^2.
  double variance(double x2) const;
};

/// Exact series evaluation of kappa(x2, xi).
double sample_kl(const KLField& field, double x2, std::span<const double> xi);

/// num_terms independent U[-1/2, 1/2] coefficients, by inversion.
Vector draw_kl_coefficients(const KLField& field, RngStream& rng);

/// One realization J(u, xi) and its gradient.
struct ObjectiveSample {
  double value = 0.0;
  TangentVector gradient;
};

/// Stochastic objective J(u, xi) with unbiased gradients:
/// E[grad J(u, xi)] = grad j(u).
class StochasticObjective {
 public:
  virtual ~StochasticObjective() = default;

  /// Draws xi from `rng` and evaluates J(u, xi) and its gradient.
  virtual ObjectiveSample sample(const Point& u, RngStream& rng) const = 0;

  /// Mean of m draws; draw s (1-based) uses stream.substream(s). Draws are
  /// reduced sequentially in s order. Overrides must compute the same mean.
  virtual ObjectiveSample batch_mean(const Point& u, std::size_t m, const RngStream& stream) const;

  /// j(u) = E[J(u, xi)] and grad j(u), when known in closed form.
  virtual std::optional<ObjectiveSample> expectation(const Point& /*u*/) const {
    return std::nullopt;
  }
};

using StochasticObjectivePtr = std::shared_ptr<const StochasticObjective>;

/// Sample mean of m gradient draws and of the objective values.
ObjectiveSample batch_gradient(const StochasticObjective& obj, const Point& u, std::size_t m,
                               const RngStream& stream);

/// Stopping index drawn uniformly from {1, ..., n}.
std::int64_t draw_stopping(std::int64_t n, RngStream& stream);

/// Estimate of M^2: the largest, over `points`, sample variance
/// E||grad J - mean||_G^2 from `draws` draws each.
double estimate_variance_bound(const Manifold& m, const StochasticObjective& obj,
                               std::span<const Point> points, std::size_t draws,
                               const RngStream& stream);

}  // namespace salm
