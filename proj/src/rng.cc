#include "d2d/rng.hpp"

#include <cmath>
#include <numbers>

namespace d2d {

std::uint64_t splitmix64_mix(std::uint64_t x) {
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : key_(splitmix64_mix(seed ^ (stream * 0xD1B54A32D192ED03ULL))) {}

CounterRng::result_type CounterRng::at(std::uint64_t counter) const {
  return splitmix64_mix(key_ + (counter + 1) * 0x9E3779B97F4A7C15ULL);
}

double CounterRng::uniform() {
  return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

double CounterRng::uniform_open_closed() {
  return static_cast<double>(((*this)() >> 11) + 1) * 0x1.0p-53;
}

double CounterRng::normal() {
  const double u1 = uniform_open_closed();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Eigen::VectorXd CounterRng::unit_sphere(int d) {
  Eigen::VectorXd v(d);
  for (;;) {
    for (int i = 0; i < d; ++i) v[i] = normal();
    const double n = v.norm();
    if (n > 0.0) return v / n;
  }
}

}  // namespace d2d
