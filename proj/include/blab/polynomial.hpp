#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace blab {

using Complex = std::complex<double>;

/// Dense complex polynomial, coefficients in ascending powers.
using Coefficients = std::vector<Complex>;

Complex horner(std::span<const Complex> coeffs, Complex z);
Coefficients derivative_coefficients(std::span<const Complex> coeffs);
Coefficients multiply(std::span<const Complex> a, std::span<const Complex> b);
Coefficients subtract(std::span<const Complex> a, std::span<const Complex> b);

struct AberthOptions {
  int max_iterations = 500;
  double step_tolerance = 1e-12;
  double initial_radius = 0.5;
};

struct AberthResult {
  std::vector<Complex> roots;
  int iterations = 0;
  bool converged = false;
};

/// Simultaneous (Aberth-Ehrlich) iteration on a polynomial given by its
/// coefficients. Trailing zero leading coefficients are stripped first.
AberthResult aberth_roots(std::span<const Complex> coeffs, const AberthOptions& options = {});

/// B = prefactor * P / Q with P(z) = prod (z_n - z), Q(z) = prod (1 - conj(z_n) z).
struct RationalForm {
  Coefficients p_coeffs;
  Coefficients q_coeffs;
  Complex unimodular_prefactor{1.0, 0.0};

  [[nodiscard]] std::size_t degree() const { return p_coeffs.empty() ? 0 : p_coeffs.size() - 1; }
  [[nodiscard]] Complex evaluate(Complex z) const;
  /// B' = prefactor * (P'Q - PQ') / Q^2, differentiated in coefficient form.
  [[nodiscard]] Complex derivative(Complex z) const;
  /// Coefficients of W = P'Q - PQ', whose roots inside the disk are the critical points.
  [[nodiscard]] Coefficients critical_numerator() const;
};

}  // namespace blab
