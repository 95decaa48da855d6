#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace footlift {

// Deterministic random source. All distribution transforms are implemented
// here (not via std:: distributions, whose output is implementation-defined)
// so that seeded runs reproduce bit-for-bit across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53-bit resolution.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via Box-Muller. Stateless per call: draws two uniforms
  // and returns one variate, keeping the stream layout independent of how
  // many normals a caller consumes.
  double normal() {
    double u1 = 1.0 - uniform();  // (0, 1]
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  // Child stream for (seed, a, b, c); independent of draws made on *this*.
  // Parallel and serial generation over indices agree bit-for-bit.
  static Rng substream(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                       std::uint64_t c = 0) {
    std::uint64_t s = mix(seed);
    s = mix(s ^ (0x9e3779b97f4a7c15ull + a));
    s = mix(s ^ (0xbf58476d1ce4e5b9ull + b));
    s = mix(s ^ (0x94d049bb133111ebull + c));
    return Rng(s);
  }

 private:
  // splitmix64 finalizer
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::mt19937_64 engine_;
};

}  // namespace footlift
