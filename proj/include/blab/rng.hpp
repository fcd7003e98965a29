#pragma once

#include <cstdint>
#include <random>

namespace blab {

/// splitmix64 finaliser; used to derive independent seeds.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Random stream keyed by (seed, index), so that sample i draws the same
/// numbers regardless of how samples are scheduled across workers.
class Stream {
 public:
  Stream(std::uint64_t seed, std::uint64_t index) : engine_(mix64(mix64(seed) ^ mix64(index + 0x51ed270b27a4d3c1ULL))) {}

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [lo, hi].
  std::uint64_t integer(std::uint64_t lo, std::uint64_t hi) { return lo + engine_() % (hi - lo + 1); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace blab
