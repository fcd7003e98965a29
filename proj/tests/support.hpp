#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

#include "blab/core_products.hpp"
#include "blab/rng.hpp"

namespace blab::testing {

inline constexpr double kPi = std::numbers::pi;

/// Uniform in the disk of radius `max_r`.
inline Complex disk_point(Stream& rng, double max_r) {
  const double r = max_r * std::sqrt(rng.uniform());
  return std::polar(r, 2.0 * kPi * rng.uniform());
}

/// n zeros with modulus in [min_r, max_r], uniform in angle.
inline ZeroSequence random_zeros(std::uint64_t seed, std::size_t n, double min_r = 0.05, double max_r = 0.95) {
  std::vector<Complex> z;
  for (std::size_t k = 0; k < n; ++k) {
    Stream rng(seed, k);
    const double r = rng.uniform(min_r, max_r);
    z.push_back(std::polar(r, 2.0 * kPi * rng.uniform()));
  }
  return ZeroSequence(std::span<const Complex>(z));
}

inline BlaschkeProduct random_product(std::uint64_t seed, std::size_t n, double min_r = 0.05, double max_r = 0.95) {
  return BlaschkeProduct(random_zeros(seed, n, min_r, max_r));
}

inline BlaschkeProduct product(std::initializer_list<Complex> zeros) {
  const std::vector<Complex> z(zeros);
  return BlaschkeProduct(ZeroSequence(std::span<const Complex>(z)));
}

inline double rel_err(Complex a, Complex b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

/// Minimum distance from z to the zeros of B.
inline double distance_to_zeros(const BlaschkeProduct& b, Complex z) {
  double best = 1e300;
  for (const Zero& zero : b.zeros()) best = std::min(best, std::abs(z - zero.value));
  return best;
}

}  // namespace blab::testing
