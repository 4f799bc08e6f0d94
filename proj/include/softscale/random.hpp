#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace softscale {

// Mixes a user seed so that consecutive seeds (base_seed + rep) start
// far-apart engine states.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed-deterministic standard normal source.
///
/// Uniforms are taken from the top 53 bits of a 64-bit Mersenne twister and
/// turned into normals with the Box-Muller transform, both pairs consumed.
/// Neither step goes through std::*_distribution, so a seed produces the
/// same stream with every standard library.
class NormalSource {
 public:
  explicit NormalSource(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  double operator()() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    // u1 in (0, 1] keeps the log finite.
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  // Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace softscale
