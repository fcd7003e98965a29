#pragma once

// Finite Blaschke products
//
//   B(z) = prod_n b_n(z),  b_n(z) = conj(z_n)/|z_n| * (z_n - z) / (1 - conj(z_n) z)
//
// Zeros are kept in polar form (deficit 1 - |z_n| and argument) next to their
// complex value, so quantities such as 1 - |z_n|^2 stay exact for zeros that
// sit closer to the circle than double spacing near 1 can express.
//
// Evaluation is a single forward pass of the product rule,
//
//   P_{k+1} = P_k b_k,  D_{k+1} = D_k b_k + P_k b_k',
//   S_{k+1} = S_k b_k + 2 D_k b_k' + P_k b_k'',
//
// which yields B, B' = sum b_n' B/b_n and B'' without dividing by any factor,
// so it stays valid at the zeros themselves. The three accumulators share a
// binary exponent that is renormalised every few factors.

#include <complex>
#include <cstddef>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include "blab/polynomial.hpp"

namespace blab {

using DiskPoint = std::complex<double>;

/// One zero of a Blaschke product.
struct Zero {
  double deficit = 0.5;   // 1 - |z_n|, in (0, 1)
  double angle = 0.0;     // arg z_n
  Complex direction{1.0, 0.0};  // z_n / |z_n|
  Complex value{0.5, 0.0};      // z_n

  [[nodiscard]] double modulus() const { return 1.0 - deficit; }
  /// 1 - |z_n|^2 computed from the deficit.
  [[nodiscard]] double one_minus_mod2() const { return deficit * (2.0 - deficit); }

  /// From a complex value; throws InvalidZeroError unless 0 < |z| < 1.
  static Zero from_complex(Complex z);
  /// From (1 - |z|, arg z); throws InvalidZeroError unless 0 < deficit < 1.
  static Zero from_polar(double deficit, double angle);
};

/// Ordered zero list (multiplicity by repetition) with cached Blaschke sum.
class ZeroSequence {
 public:
  ZeroSequence() = default;
  explicit ZeroSequence(std::span<const Complex> zeros);
  explicit ZeroSequence(std::vector<Zero> zeros);

  void push_back(const Zero& zero);
  void push_back(Complex z) { push_back(Zero::from_complex(z)); }

  [[nodiscard]] std::size_t size() const { return zeros_.size(); }
  [[nodiscard]] bool empty() const { return zeros_.empty(); }
  [[nodiscard]] const Zero& operator[](std::size_t i) const { return zeros_[i]; }
  [[nodiscard]] std::span<const Zero> zeros() const { return zeros_; }
  [[nodiscard]] auto begin() const { return zeros_.begin(); }
  [[nodiscard]] auto end() const { return zeros_.end(); }

  /// alpha = sum (1 - |z_n|), compensated summation over the stored list.
  [[nodiscard]] double alpha() const { return alpha_; }

  /// First `count` zeros (clamped to size).
  [[nodiscard]] ZeroSequence prefix(std::size_t count) const;
  /// Zeros from index `start` on.
  [[nodiscard]] ZeroSequence suffix(std::size_t start) const;

 private:
  void recompute_alpha();

  std::vector<Zero> zeros_;
  double alpha_ = 0.0;
};

/// Values of B and its first two derivatives at a point.
struct Jet {
  Complex value;
  Complex first;
  Complex second;
};

/// Same as Jet but every component carries the common factor 2^exponent.
struct ScaledJet {
  Complex value;
  Complex first;
  Complex second;
  int exponent = 0;

  [[nodiscard]] Jet unscaled() const;
};

class BlaschkeProduct {
 public:
  BlaschkeProduct() = default;
  explicit BlaschkeProduct(ZeroSequence zeros);

  [[nodiscard]] const ZeroSequence& zeros() const { return zeros_; }
  [[nodiscard]] std::size_t degree() const { return zeros_.size(); }

  [[nodiscard]] Complex operator()(Complex z) const;
  [[nodiscard]] ScaledJet scaled_jet(Complex z) const;
  [[nodiscard]] Jet jet(Complex z) const { return scaled_jet(z).unscaled(); }

  /// 1 - |B(z)|^2 without cancellation, from 1 - |b_n|^2 = (1-|z_n|^2)(1-|z|^2)/|1-conj(z_n) z|^2.
  [[nodiscard]] double one_minus_mod2(Complex z) const;

  /// Coefficient form P/Q, built once on first use and shared by copies.
  [[nodiscard]] const RationalForm& rational() const;

 private:
  struct RationalCache {
    std::once_flag once;
    RationalForm form;
  };

  ZeroSequence zeros_;
  std::shared_ptr<RationalCache> cache_ = std::make_shared<RationalCache>();
};

/// b_n(z) for a single zero z_n; throws InvalidZeroError unless 0 < |z_n| < 1.
Complex blaschke_factor(DiskPoint z, DiskPoint zn);

Complex evaluate(const BlaschkeProduct& b, DiskPoint z);

/// B'(z) = sum_n b_n'(z) prod_{m != n} b_m(z). Throws DomainError for |z| > 1.
Complex derivative(const BlaschkeProduct& b, DiskPoint z);

/// Finite-difference oracle: central differences along the real and imaginary
/// directions, averaged. Throws DomainError unless h > 0 and |z| + h < 1.
Complex derivative_fd(const BlaschkeProduct& b, DiskPoint z, double h);

double blaschke_sum(const ZeroSequence& zeros);

/// Upper estimate sum_tail 2(1-|z_n|)/(1-|z|) of |1 - prod_tail b_n(z)|.
/// Throws DomainError for |z| >= 1.
double truncation_tail(const ZeroSequence& tail, DiskPoint z);

/// Builds P, Q and the unimodular prefactor by incremental multiplication.
RationalForm build_rational_form(const ZeroSequence& zeros);

}  // namespace blab
