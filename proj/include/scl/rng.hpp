#ifndef SCL_RNG_HPP
#define SCL_RNG_HPP

#include <cmath>
#include <cstdint>

#include <Eigen/Core>

namespace scl {

// SplitMix64 finalizer. Bijective on 64-bit words, full avalanche.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

// Folds one word into a key; injective in `word` for fixed `key`.
constexpr std::uint64_t fold_key(std::uint64_t key, std::uint64_t word) noexcept {
  return mix64(key + 0x9e3779b97f4a7c15ULL * (word + 1));
}

// Stateless counter-based generator keyed by (seed, stream, path).
// Every draw is a pure function of (key, counter), so batches are
// reproducible and trivially parallel over paths.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t path)
      : key_(fold_key(fold_key(fold_key(0x73636c2d726e67ULL, seed), stream), path)) {}

  // Uniform in (0, 1]; never returns 0 so log() below is safe.
  double uniform(std::uint64_t counter) const noexcept {
    return static_cast<double>((fold_key(key_, counter) >> 11) + 1) * 0x1.0p-53;
  }

  // Box-Muller pair from two counters.
  void normal_pair(std::uint64_t counter, double& z0, double& z1) const noexcept {
    const double u1 = uniform(counter);
    const double u2 = uniform(counter + 1);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    z0 = r * std::cos(a);
    z1 = r * std::sin(a);
  }

  // Standard normals for one step; lane layout is fixed so the same
  // (seed, stream, path, step) always yields the same vector.
  void fill_normals(std::int64_t step, Eigen::Ref<Eigen::VectorXd> out) const {
    const auto dim = static_cast<int>(out.size());
    const std::uint64_t base = static_cast<std::uint64_t>(step) * kLanesPerStep;
    double z0, z1;
    int i = 0;
    for (; i + 1 < dim; i += 2) {
      normal_pair(base + static_cast<std::uint64_t>(i), z0, z1);
      out[i] = z0;
      out[i + 1] = z1;
    }
    if (i < dim) {
      normal_pair(base + static_cast<std::uint64_t>(i), z0, z1);
      out[i] = z0;
    }
  }

  double normal(std::int64_t step, int lane) const noexcept {
    const std::uint64_t base = static_cast<std::uint64_t>(step) * kLanesPerStep;
    double z0, z1;
    normal_pair(base + static_cast<std::uint64_t>(lane & ~1), z0, z1);
    return (lane & 1) ? z1 : z0;
  }

  // Counter space reserved per step; bounds the supported state dimension.
  static constexpr std::uint64_t kLanesPerStep = 256;

 private:
  std::uint64_t key_;
};

// Stream ids keep independent sampling purposes from colliding on one seed.
namespace streams {
inline constexpr std::uint64_t kBrownian = 0;
inline constexpr std::uint64_t kUniformSphere = 1;
inline constexpr std::uint64_t kInstanceDraw = 2;
}  // namespace streams

}  // namespace scl

#endif  // SCL_RNG_HPP
