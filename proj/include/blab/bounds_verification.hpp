#pragma once

// Numerical checks of the derivative bound for Blaschke products with zeros in
// S(E, K) and of the inequalities it is assembled from:
//
//   three-point   phi((x+y+u)/3) <= phi(x) + phi(y) + phi(u)
//   lemma         phi(|t - z|lambda|| / 3) / |1 - conj(lambda) z| <= 2C + K,  lambda in S(t, K)
//   chord         |t - z| <= 2 |t - z|lambda||
//   derivative    |B'(z)| <= 2 (2C + K)^2 alpha / phi(d(z, E) / 6)^2
//   Schwarz-Pick  |B'(z)| <= (1 - |B(z)|^2) / (1 - |z|^2)
//
// phi(.)^-2 in the derivative bound is the reciprocal of phi squared.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "blab/core_products.hpp"
#include "blab/regions_geometry.hpp"

namespace blab::bounds {

using regions::BoundarySet;
using regions::ModelFunction;
using regions::StolzSpec;

struct Witness {
  std::size_t index = 0;
  Complex z;
  Complex t;
  Complex lambda;
};

struct RatioRecord {
  double ratio = 0.0;
  Witness witness;
};

/// Aggregated outcome of a sampled inequality check. `worst` holds the
/// largest LHS/RHS ratios in decreasing order (ties by sample index).
struct BoundReport {
  std::size_t samples = 0;
  std::size_t violations = 0;
  double worst_ratio = 0.0;
  Witness worst_witness;
  std::vector<RatioRecord> worst;

  void record(double ratio, const Witness& witness, bool violated, std::size_t keep);
  /// Associative, order-independent merge.
  static BoundReport merge(BoundReport a, const BoundReport& b, std::size_t keep);
};

inline constexpr std::size_t kDefaultWorstKept = 10;

bool three_point_check(const ModelFunction& phi, double x, double y, double u);

double lemma_lhs(Complex z, Complex t, Complex lambda, const ModelFunction& phi);

struct LemmaOptions {
  double tolerance = 1e-12;
  std::size_t keep_worst = kDefaultWorstKept;
  /// Deficits 1 - |lambda| are drawn log-uniformly in [min_deficit, 1].
  double min_deficit = 1e-9;
};

/// Samples z in the closed disk and lambda in S(t, K) and checks the lemma
/// bound 2C + K. Throws SamplingFailure when S(t, K) is empty.
BoundReport lemma_check(const ModelFunction& phi, double vertex_angle, double k_const, std::size_t n_samples,
                        std::uint64_t seed, const LemmaOptions& options = {});

bool chord_check(Complex z, Complex lambda, Complex t);

struct TheoremValue {
  double lhs = 0.0;
  double rhs = 0.0;  // +inf when phi(d(z,E)/6) vanishes
};

/// Throws PreconditionError naming the first zero outside S(E, K).
void require_zeros_in_region(const BlaschkeProduct& b, const StolzSpec& spec);

/// lhs = |B'(z)|, rhs = 2(2C+K)^2 alpha / phi(d(z,E)/6)^2.
TheoremValue theorem_bound(const BlaschkeProduct& b, Complex z, const StolzSpec& spec);

/// theorem_bound over a grid, zeros validated once.
BoundReport theorem_check(const BlaschkeProduct& b, const StolzSpec& spec, std::span<const Complex> grid,
                          double tolerance = 1e-9, std::size_t keep_worst = kDefaultWorstKept);

/// max over zeros of phi(d(z,E)/6) / phi(|t_k - z|lambda_k|| / 3), with t_k the
/// point of E nearest to lambda_k; at most 1 whenever the proof step holds.
double theorem_intermediate_ratio(const BlaschkeProduct& b, Complex z, const StolzSpec& spec);

double schwarz_pick_ratio(const BlaschkeProduct& b, Complex z);
bool schwarz_pick_check(const BlaschkeProduct& b, Complex z);

struct EnvelopeFit {
  double c1 = 0.0;
  double c2 = 0.0;
  double rho = 1.0;
  std::size_t grid_size = 0;
};

/// c1 = max |B'| over grid points with d(z,E) >= 1/2,
/// c2 = max d^rho log+(|B'|/c1). Throws DomainError for grid points on E.
EnvelopeFit envelope_fit(const BlaschkeProduct& b, const BoundarySet& set, double rho, std::span<const Complex> grid);

/// max over grid of |B'(z)| / (c1 exp(c2 / d^rho)).
double envelope_violation(const EnvelopeFit& fit, const BlaschkeProduct& b, const BoundarySet& set,
                          std::span<const Complex> grid);

/// Points r e^{i theta} for every radius and `angular` equally spaced angles
/// starting at `angle_offset`.
std::vector<Complex> polar_grid(std::span<const double> radii, std::size_t angular, double angle_offset = 0.0);

/// `uniform` points uniform in the disk followed by `near` points close to E:
/// deficit log-uniform in [1e-6, 1/2], angle within 3 deficits of a point of E.
/// Point k depends only on (seed, k).
std::vector<Complex> sample_grid(const BoundarySet& set, std::size_t uniform, std::size_t near, std::uint64_t seed);

}  // namespace blab::bounds
