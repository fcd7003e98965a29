#include "blab/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "blab/error.hpp"

namespace blab {

Complex horner(std::span<const Complex> coeffs, Complex z) {
  Complex acc(0.0, 0.0);
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
    acc = acc * z + *it;
  }
  return acc;
}

Coefficients derivative_coefficients(std::span<const Complex> coeffs) {
  if (coeffs.size() <= 1) {
    return {Complex(0.0, 0.0)};
  }
  Coefficients out(coeffs.size() - 1);
  for (std::size_t k = 1; k < coeffs.size(); ++k) {
    out[k - 1] = static_cast<double>(k) * coeffs[k];
  }
  return out;
}

Coefficients multiply(std::span<const Complex> a, std::span<const Complex> b) {
  if (a.empty() || b.empty()) {
    return {};
  }
  Coefficients out(a.size() + b.size() - 1, Complex(0.0, 0.0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      out[i + j] += a[i] * b[j];
    }
  }
  return out;
}

Coefficients subtract(std::span<const Complex> a, std::span<const Complex> b) {
  Coefficients out(std::max(a.size(), b.size()), Complex(0.0, 0.0));
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[i] -= b[i];
  return out;
}

AberthResult aberth_roots(std::span<const Complex> coeffs, const AberthOptions& options) {
  std::size_t n = coeffs.size();
  double scale = 0.0;
  for (const Complex c : coeffs) scale = std::max(scale, std::abs(c));
  while (n > 0 && std::abs(coeffs[n - 1]) <= 1e-14 * scale) --n;
  if (n == 0) {
    throw DomainError("aberth_roots: zero polynomial");
  }
  const std::span<const Complex> poly = coeffs.first(n);
  const Coefficients dpoly = derivative_coefficients(poly);
  const std::size_t degree = n - 1;

  AberthResult result;
  result.roots.resize(degree);
  for (std::size_t k = 0; k < degree; ++k) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(degree) + 0.4;
    result.roots[k] = std::polar(options.initial_radius, angle);
  }
  if (degree == 0) {
    result.converged = true;
    return result;
  }

  for (int iter = 1; iter <= options.max_iterations; ++iter) {
    double max_step = 0.0;
    for (std::size_t k = 0; k < degree; ++k) {
      const Complex z = result.roots[k];
      const Complex f = horner(poly, z);
      if (f == 0.0) continue;
      const Complex newton = f / horner(dpoly, z);
      Complex repulsion(0.0, 0.0);
      for (std::size_t j = 0; j < degree; ++j) {
        if (j != k) repulsion += 1.0 / (z - result.roots[j]);
      }
      const Complex step = newton / (1.0 - newton * repulsion);
      result.roots[k] = z - step;
      max_step = std::max(max_step, std::abs(step));
    }
    result.iterations = iter;
    if (max_step < options.step_tolerance) {
      result.converged = true;
      break;
    }
  }
  return result;
}

Complex RationalForm::evaluate(Complex z) const {
  return unimodular_prefactor * horner(p_coeffs, z) / horner(q_coeffs, z);
}

Complex RationalForm::derivative(Complex z) const {
  const Complex q = horner(q_coeffs, z);
  return unimodular_prefactor * horner(critical_numerator(), z) / (q * q);
}

Coefficients RationalForm::critical_numerator() const {
  const Coefficients dp = derivative_coefficients(p_coeffs);
  const Coefficients dq = derivative_coefficients(q_coeffs);
  return subtract(multiply(dp, q_coeffs), multiply(p_coeffs, dq));
}

}  // namespace blab
