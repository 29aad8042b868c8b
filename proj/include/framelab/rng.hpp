#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace framelab {

// Deterministic random streams. std::mt19937_64 output is fully specified by
// the standard, and all variate transforms are implemented here (the standard
// library distributions are implementation-defined), so results are
// bit-identical across platforms and runs for a given (seed, stream).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(mix(seed)) {}
  Rng(std::uint64_t seed, std::uint64_t stream)
      : gen_(mix(mix(seed) ^ (stream + 0x9e3779b97f4a7c15ull))) {}

  std::uint64_t next() { return gen_(); }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  // Standard normal via Box-Muller; second variate cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(t);
    has_spare_ = true;
    return r * std::cos(t);
  }

  // Unbiased uniform integer in [0, bound), bound >= 1.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t threshold = (~bound + 1) % bound;  // 2^64 mod bound
    for (;;) {
      const std::uint64_t r = next();
      if (r >= threshold) return r % bound;
    }
  }

 private:
  static std::uint64_t mix(std::uint64_t x) {
    // splitmix64 finalizer
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
  }

  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Roles for deriving independent sub-streams of one Monte-Carlo trial, so
// that estimators sharing a seed see identical pattern sequences.
enum class StreamRole : std::uint64_t { Pattern = 0, Signal = 1, Noise = 2 };

inline Rng trial_rng(std::uint64_t seed, std::uint64_t trial, StreamRole role) {
  return Rng(seed, trial * 4 + static_cast<std::uint64_t>(role));
}

}  // namespace framelab
