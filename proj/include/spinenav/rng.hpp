#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace spinenav {

/// Deterministic random stream. Gaussian draws go through Box-Muller on raw
/// uniform doubles so sequences do not depend on the standard library's
/// distribution internals; per-trial streams derived via derive() are
/// independent of scheduling order.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_material_(mix(seed)), engine_(seed_material_) {}

  /// Stream for a sub-task (e.g. one simulation trial), decorrelated from
  /// the parent and from sibling streams.
  Rng derive(std::uint64_t stream_index) const {
    return Rng(seed_material_ + 0x9E3779B97F4A7C15ULL * (stream_index + 1));
  }

  double uniform() {  // [0, 1)
    return (engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double gaussian(double sigma = 1.0) {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return sigma * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  Eigen::Vector3d gaussian_vector(double sigma) {
    return {gaussian(sigma), gaussian(sigma), gaussian(sigma)};
  }

  /// Uniform direction on the unit sphere.
  Eigen::Vector3d unit_vector() {
    const double z = uniform(-1.0, 1.0);
    const double phi = uniform(0.0, 2.0 * std::numbers::pi);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    return {r * std::cos(phi), r * std::sin(phi), z};
  }

  std::uint64_t next_u64() { return engine_(); }

 private:
  static std::uint64_t mix(std::uint64_t x) {  // splitmix64 finalizer
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
  }

  std::uint64_t seed_material_;
  std::mt19937_64 engine_;
};

}  // namespace spinenav
