#include "salm/stochastic.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "salm/errors.hpp"

namespace salm {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_key(std::uint64_t seed, const StreamPath& path) {
  std::uint64_t key = mix64(seed + kGolden);
  key = mix64(key ^ (path.k + 0x6A09E667F3BCC909ULL));
  key = mix64(key ^ (path.j + 0xBB67AE8584CAA73BULL));
  key = mix64(key ^ (path.s + 0x3C6EF372FE94F82BULL));
  return key;
}

}  // namespace

RngStream::RngStream(std::uint64_t root_seed, StreamPath path)
    : root_seed_(root_seed), path_(path), state_(derive_key(root_seed, path)) {}

RngStream::result_type RngStream::operator()() {
  state_ += kGolden;
  return mix64(state_);
}

double RngStream::uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

double RngStream::normal() { return normal_(*this); }

void KLField::validate() const {
  if (num_terms < 1) throw ParameterError("KL field needs at least one term");
  if (!(eta > 0.0)) throw ParameterError("KL decay exponent must be positive");
}

double KLField::coefficient(int l) const { return std::pow(static_cast<double>(l), -eta - 0.5); }

double KLField::mean_profile(double x2) { return -4.0 * x2 * (x2 - 1.0); }

Vector KLField::basis(double x2) const {
  validate();
  if (!(x2 >= 0.0 && x2 <= 1.0)) throw DomainError("KL field is defined for x2 in [0, 1]");
  Vector out(num_terms);
  for (int l = 1; l <= num_terms; ++l) {
    out[l - 1] = coefficient(l) * std::sin(2.0 * std::numbers::pi * l * (x2 - 0.5));
  }
  return out;
}

double KLField::variance(double x2) const { return basis(x2).squaredNorm() / 12.0; }

double sample_kl(const KLField& field, double x2, std::span<const double> xi) {
  field.validate();
  if (!(x2 >= 0.0 && x2 <= 1.0)) throw DomainError("KL field is defined for x2 in [0, 1]");
  if (xi.size() != static_cast<std::size_t>(field.num_terms)) {
    throw DimensionError("KL draw has " + std::to_string(xi.size()) + " coefficients, expected " +
                         std::to_string(field.num_terms));
  }
  double sum = KLField::mean_profile(x2);
  for (int l = 1; l <= field.num_terms; ++l) {
    const double c = xi[static_cast<std::size_t>(l - 1)];
    if (std::abs(c) > 0.5) throw DomainError("KL coefficient outside [-1/2, 1/2]");
    sum += field.coefficient(l) * std::sin(2.0 * std::numbers::pi * l * (x2 - 0.5)) * c;
  }
  return sum;
}

Vector draw_kl_coefficients(const KLField& field, RngStream& rng) {
  field.validate();
  Vector xi(field.num_terms);
  for (auto& c : xi) c = rng.uniform() - 0.5;
  return xi;
}

ObjectiveSample StochasticObjective::batch_mean(const Point& u, std::size_t m,
                                                const RngStream& stream) const {
  ObjectiveSample acc{0.0, TangentVector::zero(u)};
  for (std::size_t s = 1; s <= m; ++s) {
    RngStream rng = stream.substream(s);
    ObjectiveSample draw = sample(u, rng);
    require_base(u, draw.gradient);
    acc.value += draw.value;
    acc.gradient.components += draw.gradient.components;
  }
  const double inv = 1.0 / static_cast<double>(m);
  acc.value *= inv;
  acc.gradient.components *= inv;
  return acc;
}

ObjectiveSample batch_gradient(const StochasticObjective& obj, const Point& u, std::size_t m,
                               const RngStream& stream) {
  if (m == 0) throw ParameterError("batch size must be at least 1");
  return obj.batch_mean(u, m, stream);
}

std::int64_t draw_stopping(std::int64_t n, RngStream& stream) {
  if (n < 1) throw ParameterError("iteration limit must be at least 1");
  const auto r = static_cast<std::int64_t>(stream.uniform() * static_cast<double>(n));
  return 1 + std::min(r, n - 1);
}

double estimate_variance_bound(const Manifold& m, const StochasticObjective& obj,
                               std::span<const Point> points, std::size_t draws,
                               const RngStream& stream) {
  if (draws < 2) throw ParameterError("variance estimate needs at least two draws");
  double worst = 0.0;
  std::uint64_t idx = 0;
  for (const Point& u : points) {
    const RngStream base = stream.at({stream.path().k, stream.path().j + idx++, 0});
    std::vector<Vector> grads;
    grads.reserve(draws);
    Vector mean = Vector::Zero(u.size());
    for (std::size_t s = 1; s <= draws; ++s) {
      RngStream rng = base.substream(s);
      grads.push_back(obj.sample(u, rng).gradient.components);
      mean += grads.back();
    }
    mean /= static_cast<double>(draws);
    double var = 0.0;
    for (const Vector& g : grads) {
      const Vector d = g - mean;
      var += m.inner(u, d, d);
    }
    worst = std::max(worst, var / static_cast<double>(draws - 1));
  }
  return worst;
}

}  // namespace salm
