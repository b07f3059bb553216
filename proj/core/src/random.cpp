#include "mvtm/random.hpp"

#include <cmath>

#include "mvtm/error.hpp"

namespace mvtm {

std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t tag,
                             std::uint64_t index) {
  return mix64(mix64(mix64(seed) ^ tag) ^ index);
}

double Rng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform_open() {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

std::uint64_t Rng::uniform_index(std::uint64_t n) {
  if (n == 0) throw ConfigError("uniform_index: n must be positive");
  const std::uint64_t bound = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t r = next_u64();
  while (r >= bound) r = next_u64();
  return r % n;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double m = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * m;
  has_spare_ = true;
  return u * m;
}

namespace {

// Marsaglia-Tsang squeeze for shape >= 1.
double gamma_ge1(Rng& rng, double shape) {
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = rng.normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform_open();
    if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) {
      return d * v;
    }
  }
}

}  // namespace

double Rng::log_gamma(double shape) {
  if (!(shape > 0.0)) throw ConfigError("log_gamma: shape must be positive");
  if (shape >= 1.0) return std::log(gamma_ge1(*this, shape));
  // Shape boost: G(a) = G(a+1) * U^{1/a}, applied in log space so small
  // shapes never underflow.
  const double boosted = gamma_ge1(*this, shape + 1.0);
  return std::log(boosted) + std::log(uniform_open()) / shape;
}

Eigen::VectorXd Rng::dirichlet(double concentration, Eigen::Index n) {
  Eigen::VectorXd log_draws(n);
  for (Eigen::Index i = 0; i < n; ++i) log_draws[i] = log_gamma(concentration);
  const double top = log_draws.maxCoeff();
  const double lse = top + std::log((log_draws.array() - top).exp().sum());
  return (log_draws.array() - lse).exp();
}

}  // namespace mvtm
