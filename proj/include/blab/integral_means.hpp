#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "blab/core_products.hpp"

namespace blab::means {

/// Gauss-Legendre rule mapped to [0, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussRule gauss_legendre_unit(int n);

/// Relative disagreement between a rule and its node-doubled refinement above
/// which quadrature is rejected.
inline constexpr double kDoublingTolerance = 1e-4;

/// (1/2pi \int |f(r e^{i theta})|^p d theta)^{1/p} by the trapezoid rule on
/// `nodes` points; no validation.
double circle_mean(const std::function<double(Complex)>& modulus, double p, double r, int nodes);

/// Hardy mean M_p(r, B'), trapezoid rule validated against 2 * nodes; returns
/// the refined value. Requires nodes >= 64 and nodes >= 16 * degree.
double hardy_mean(const BlaschkeProduct& b, double p, double r, int nodes);

/// Node count used by hp_trend: the smallest power of two that is at least
/// max(64, 16 * degree, 32 / (1 - r)).
int hardy_nodes(std::size_t degree, double r);

/// Cap for the node doubling done by hp_trend and adaptive_hardy_mean.
inline constexpr int kMaxHardyNodes = 1 << 20;

/// hardy_mean starting from hardy_nodes and doubling the node count until the
/// doubling check passes; ResolutionError once kMaxHardyNodes fails.
double adaptive_hardy_mean(const BlaschkeProduct& b, double p, double r);

/// \int_D |B'|^p dx dy: Gauss-Legendre in r (weight r), trapezoid in theta,
/// validated against doubled node counts; returns the refined value.
double bergman_integral(const BlaschkeProduct& b, double p, int radial_nodes, int angular_nodes);

struct MeansRow {
  std::size_t truncation = 0;
  double p = 0.0;
  double r = 0.0;
  double value = 0.0;
};

struct MeansTable {
  std::vector<MeansRow> rows;

  /// max over r of the rows with this (truncation, p).
  [[nodiscard]] double sup_over_r(std::size_t truncation, double p) const;
  /// sup_over_r(to, p) / sup_over_r(from, p) - 1.
  [[nodiscard]] double growth(double p, std::size_t from, std::size_t to) const;
};

/// Truncation N -> first N zeros of a fixed sequence.
using ZeroFamily = std::function<ZeroSequence(std::size_t)>;

/// z_n = 1 - 2^-n, n = 1..N, stored exactly in polar form.
ZeroFamily radial_dyadic_family();

/// Hardy means of B'_N for every (N, p, r); nodes start at hardy_nodes and
/// double until every p passes the doubling check.
MeansTable hp_trend(const ZeroFamily& family, std::span<const double> p_list, std::span<const std::size_t> truncations,
                    std::span<const double> r_grid);

std::vector<double> default_radius_grid();

}  // namespace blab::means
