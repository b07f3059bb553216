#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Core>

namespace mvtm {

/// splitmix64 finalizer; used to derive independent substream seeds.
std::uint64_t mix64(std::uint64_t z);

/// Seed for the (tag, index) substream of a master seed. Streams derived this
/// way are stable across runs and independent of any thread schedule.
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t tag,
                             std::uint64_t index);

/// Deterministic random source. All variates are synthesized from raw
/// mt19937_64 output so the produced sequences are pinned by this code alone,
/// not by the standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1).
  double uniform();

  /// Uniform in (0, 1); safe as a log argument.
  double uniform_open();

  /// Unbiased uniform integer in [0, n).
  std::uint64_t uniform_index(std::uint64_t n);

  /// Standard normal (Marsaglia polar method).
  double normal();

  /// log of a Gamma(shape, 1) draw. The log-space form stays finite for
  /// arbitrarily small shapes, where the draw itself underflows to zero.
  double log_gamma(double shape);

  /// Symmetric Dirichlet draw of dimension n.
  Eigen::VectorXd dirichlet(double concentration, Eigen::Index n);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace mvtm
