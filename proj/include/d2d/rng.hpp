#pragma once

#include <cstdint>
#include <limits>

#include <Eigen/Dense>

namespace d2d {

/// Counter-based generator: word i of (seed, stream) is
/// splitmix64_mix(key + (i + 1) * 0x9E3779B97F4A7C15), with
/// key = splitmix64_mix(seed ^ (stream * 0xD1B54A32D192ED03)).
/// Every draw is a pure function of (seed, stream, counter), so results do not
/// depend on the platform's <random> distributions. Floating-point transforms
/// (log, cos) rely on the C math library.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return at(counter_++); }

  /// Word at an arbitrary counter position (does not advance).
  result_type at(std::uint64_t counter) const;

  std::uint64_t counter() const { return counter_; }

  /// Uniform on [0, 1) with 53 bits.
  double uniform();
  /// Uniform on (0, 1].
  double uniform_open_closed();
  /// Standard normal via the cosine branch of Box-Muller (two words per draw).
  double normal();
  /// Uniform direction on the unit sphere of R^d.
  Eigen::VectorXd unit_sphere(int d);

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t splitmix64_mix(std::uint64_t x);

}  // namespace d2d
