#include "blab/integral_means.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <sstream>

#include "blab/error.hpp"
#include "blab/parallel.hpp"

namespace blab::means {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<double> derivative_moduli_on_circle(const BlaschkeProduct& b, double r, int nodes) {
  std::vector<double> out(static_cast<std::size_t>(nodes));
  parallel_reduce(
      out.size(), 0,
      [&](std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k) {
          const Complex z = std::polar(r, kTwoPi * static_cast<double>(k) / nodes);
          out[k] = std::abs(b.jet(z).first);
        }
        return 0;
      },
      [](int a, int) { return a; });
  return out;
}

// Trapezoid mean over every `stride`-th sample.
double power_mean(const std::vector<double>& moduli, std::size_t stride, double p) {
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t k = 0; k < moduli.size(); k += stride) {
    sum += std::pow(moduli[k], p);
    ++count;
  }
  return std::pow(sum / static_cast<double>(count), 1.0 / p);
}

double relative_gap(double coarse, double fine) {
  const double scale = std::max(std::abs(fine), std::abs(coarse));
  return scale > 0.0 ? std::abs(fine - coarse) / scale : 0.0;
}

void check_hardy_args(const BlaschkeProduct& b, double p, double r, int nodes) {
  if (!(p > 0.0)) throw DomainError("hardy_mean: need p > 0");
  if (!(r >= 0.0 && r < 1.0)) throw DomainError("hardy_mean: need 0 <= r < 1");
  if (nodes < 64 || static_cast<std::size_t>(nodes) < 16 * b.degree()) {
    throw DomainError("hardy_mean: need nodes >= 64 and nodes >= 16 * degree");
  }
}

double validated_mean(const std::vector<double>& fine_moduli, double p, double r, int nodes) {
  const double coarse = power_mean(fine_moduli, 2, p);
  const double fine = power_mean(fine_moduli, 1, p);
  if (relative_gap(coarse, fine) > kDoublingTolerance) {
    std::ostringstream os;
    os << "hardy_mean: node doubling changes M_p by " << relative_gap(coarse, fine) << " (p = " << p
       << ", r = " << r << ", nodes = " << nodes << ")";
    throw ResolutionError(os.str());
  }
  return fine;
}

double bergman_raw(const BlaschkeProduct& b, double p, const GaussRule& rule, int angular) {
  double total = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double r = rule.nodes[i];
    const std::vector<double> moduli = derivative_moduli_on_circle(b, r, angular);
    double ring = 0.0;
    for (const double m : moduli) ring += std::pow(m, p);
    total += rule.weights[i] * r * ring * (kTwoPi / angular);
  }
  return total;
}

}  // namespace

GaussRule gauss_legendre_unit(int n) {
  if (n < 1) throw DomainError("gauss_legendre_unit: need n >= 1");
  GaussRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // Map [-1, 1] to [0, 1].
    rule.nodes[static_cast<std::size_t>(i)] = 0.5 * (1.0 - x);
    rule.nodes[static_cast<std::size_t>(n - 1 - i)] = 0.5 * (1.0 + x);
    rule.weights[static_cast<std::size_t>(i)] = 0.5 * w;
    rule.weights[static_cast<std::size_t>(n - 1 - i)] = 0.5 * w;
  }
  return rule;
}

double circle_mean(const std::function<double(Complex)>& modulus, double p, double r, int nodes) {
  if (!(p > 0.0) || nodes < 1) throw DomainError("circle_mean: need p > 0 and nodes >= 1");
  double sum = 0.0;
  for (int k = 0; k < nodes; ++k) {
    sum += std::pow(modulus(std::polar(r, kTwoPi * k / nodes)), p);
  }
  return std::pow(sum / nodes, 1.0 / p);
}

double hardy_mean(const BlaschkeProduct& b, double p, double r, int nodes) {
  check_hardy_args(b, p, r, nodes);
  return validated_mean(derivative_moduli_on_circle(b, r, 2 * nodes), p, r, nodes);
}

int hardy_nodes(std::size_t degree, double r) {
  const double want = std::max({64.0, 16.0 * static_cast<double>(degree), 32.0 / (1.0 - r)});
  return static_cast<int>(std::bit_ceil(static_cast<unsigned long>(std::ceil(want))));
}

double bergman_integral(const BlaschkeProduct& b, double p, int radial_nodes, int angular_nodes) {
  if (!(p > 0.0)) throw DomainError("bergman_integral: need p > 0");
  if (radial_nodes < 64 || angular_nodes < 64) throw DomainError("bergman_integral: node counts must be >= 64");
  const double coarse = bergman_raw(b, p, gauss_legendre_unit(radial_nodes), angular_nodes);
  const double fine = bergman_raw(b, p, gauss_legendre_unit(2 * radial_nodes), 2 * angular_nodes);
  if (relative_gap(coarse, fine) > kDoublingTolerance) {
    std::ostringstream os;
    os << "bergman_integral: node doubling changes the integral by " << relative_gap(coarse, fine);
    throw ResolutionError(os.str());
  }
  return fine;
}

double MeansTable::sup_over_r(std::size_t truncation, double p) const {
  double best = 0.0;
  bool found = false;
  for (const MeansRow& row : rows) {
    if (row.truncation == truncation && row.p == p) {
      best = found ? std::max(best, row.value) : row.value;
      found = true;
    }
  }
  if (!found) throw DomainError("MeansTable: no rows for the requested (N, p)");
  return best;
}

double MeansTable::growth(double p, std::size_t from, std::size_t to) const {
  return sup_over_r(to, p) / sup_over_r(from, p) - 1.0;
}

ZeroFamily radial_dyadic_family() {
  return [](std::size_t n) {
    std::vector<Zero> zeros;
    zeros.reserve(n);
    for (std::size_t k = 1; k <= n; ++k) {
      zeros.push_back(Zero::from_polar(std::ldexp(1.0, -static_cast<int>(k)), 0.0));
    }
    return ZeroSequence(std::move(zeros));
  };
}

MeansTable hp_trend(const ZeroFamily& family, std::span<const double> p_list, std::span<const std::size_t> truncations,
                    std::span<const double> r_grid) {
  MeansTable table;
  for (const std::size_t n : truncations) {
    const BlaschkeProduct b(family(n));
    for (const double r : r_grid) {
      int nodes = hardy_nodes(b.degree(), r);
      for (const double p : p_list) check_hardy_args(b, p, r, nodes);
      std::vector<MeansRow> rows;
      for (;;) {
        const std::vector<double> moduli = derivative_moduli_on_circle(b, r, 2 * nodes);
        try {
          rows.clear();
          for (const double p : p_list) rows.push_back({n, p, r, validated_mean(moduli, p, r, nodes)});
          break;
        } catch (const ResolutionError&) {
          // Critical points close to the circle make |B'|^p a cusp for p < 1.
          if (nodes >= kMaxHardyNodes) throw;
          nodes *= 2;
        }
      }
      table.rows.insert(table.rows.end(), rows.begin(), rows.end());
    }
  }
  return table;
}

double adaptive_hardy_mean(const BlaschkeProduct& b, double p, double r) {
  int nodes = hardy_nodes(b.degree(), r);
  check_hardy_args(b, p, r, nodes);
  for (;;) {
    try {
      return validated_mean(derivative_moduli_on_circle(b, r, 2 * nodes), p, r, nodes);
    } catch (const ResolutionError&) {
      if (nodes >= kMaxHardyNodes) throw;
      nodes *= 2;
    }
  }
}

std::vector<double> default_radius_grid() { return {0.9, 0.99, 0.999}; }

}  // namespace blab::means
