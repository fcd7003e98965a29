#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "blab/core_products.hpp"
#include "blab/error.hpp"
#include "blab/regions_geometry.hpp"

namespace blab::critical {

/// Zeros of B' in the open disk, multiplicity by repetition, sorted by
/// decreasing modulus and then increasing argument.
struct CriticalSet {
  std::vector<Complex> points;
  std::vector<double> residuals;  // |B'(z'_n)|

  [[nodiscard]] std::size_t size() const { return points.size(); }
  [[nodiscard]] double max_residual() const;
};

struct SumSeries {
  std::vector<double> terms;
  std::vector<double> partial_sums;

  static SumSeries from_terms(std::vector<double> terms);
  [[nodiscard]] double total() const { return partial_sums.empty() ? 0.0 : partial_sums.back(); }
};

struct CriticalOptions {
  int max_iterations = 500;
  double step_tolerance = 1e-12;
  double initial_radius = 0.5;
  double interior_margin = 1e-12;
  double residual_tolerance = 1e-8;
  int newton_iterations = 50;
};

/// Raised when the root finder leaves points it cannot certify; carries what
/// it found.
class RootFindingError : public Error {
 public:
  RootFindingError(const std::string& what, CriticalSet partial, bool converged, int iterations)
      : Error(what), partial_(std::move(partial)), converged_(converged), iterations_(iterations) {}

  [[nodiscard]] const CriticalSet& partial() const { return partial_; }
  [[nodiscard]] bool converged() const { return converged_; }
  [[nodiscard]] int iterations() const { return iterations_; }

 private:
  CriticalSet partial_;
  bool converged_;
  int iterations_;
};

/// Coefficient form of B; throws DomainError for degree 0.
const RationalForm& to_rational(const BlaschkeProduct& b);

/// The n - 1 critical points of a degree-n product (n >= 1).
///
/// The roots of W = P'Q - PQ' come in pairs w, 1/conj(w) with one member in
/// the disk. The Aberth iteration keeps one estimate per pair and lets the
/// mirrored estimates act as the remaining roots in the repulsion sum. W'/W is
/// taken from the product jet, W'/W = B''/B' + 2 sum conj(z_n)/(conj(z_n) z - 1),
/// rather than from coefficients. Each point is then polished by Newton on B'.
CriticalSet critical_points(const BlaschkeProduct& b, const CriticalOptions& options = {});

/// Number of zeros of B' in |z| < r from the trapezoid rule applied to
/// (1/2 pi i) \oint B''/B' dz. Throws InconclusiveContourError when the raw
/// value is not within 0.1 of an integer.
int argument_principle_count(const BlaschkeProduct& b, double r, int nodes);

/// Terms (1 - |z'_n|) d(z'_n, E)^{max(rho - beta + eps, 0)}.
SumSeries critical_sum(const CriticalSet& cs, const regions::BoundarySet& set, double rho, double beta, double eps);

/// Terms (1 - |z'_n|) / L^{1 + eps} with L = max(log(1/(1 - |z'_n|)), 1).
SumSeries log_weighted_sum(const CriticalSet& cs, double eps);

/// Terms 1 - |z'_n|.
SumSeries unweighted_sum(const CriticalSet& cs);

/// sum (1 - |z_n|)^r for 0 < r <= 1.
double protas_sum(const ZeroSequence& zeros, double r);

}  // namespace blab::critical
