#include "blab/bounds_verification.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "blab/error.hpp"
#include "blab/parallel.hpp"

namespace blab::bounds {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool ranks_before(const RatioRecord& a, const RatioRecord& b) {
  return a.ratio > b.ratio || (a.ratio == b.ratio && a.witness.index < b.witness.index);
}

}  // namespace

void BoundReport::record(double ratio, const Witness& witness, bool violated, std::size_t keep) {
  ++samples;
  if (violated) ++violations;
  const RatioRecord rec{ratio, witness};
  if (samples == 1 || ranks_before(rec, RatioRecord{worst_ratio, worst_witness})) {
    worst_ratio = ratio;
    worst_witness = witness;
  }
  if (keep == 0) return;
  if (worst.size() < keep || ranks_before(rec, worst.back())) {
    worst.insert(std::upper_bound(worst.begin(), worst.end(), rec, ranks_before), rec);
    if (worst.size() > keep) worst.pop_back();
  }
}

BoundReport BoundReport::merge(BoundReport a, const BoundReport& b, std::size_t keep) {
  if (b.samples == 0) return a;
  if (a.samples == 0) return b;
  if (ranks_before(RatioRecord{b.worst_ratio, b.worst_witness}, RatioRecord{a.worst_ratio, a.worst_witness})) {
    a.worst_ratio = b.worst_ratio;
    a.worst_witness = b.worst_witness;
  }
  a.samples += b.samples;
  a.violations += b.violations;
  std::vector<RatioRecord> merged;
  merged.reserve(a.worst.size() + b.worst.size());
  std::merge(a.worst.begin(), a.worst.end(), b.worst.begin(), b.worst.end(), std::back_inserter(merged),
             ranks_before);
  if (merged.size() > keep) merged.resize(keep);
  a.worst = std::move(merged);
  return a;
}

bool three_point_check(const ModelFunction& phi, double x, double y, double u) {
  return phi((x + y + u) / 3.0) <= phi(x) + phi(y) + phi(u) + 1e-14;
}

double lemma_lhs(Complex z, Complex t, Complex lambda, const ModelFunction& phi) {
  const double numerator = phi(std::abs(t - z * std::abs(lambda)) / 3.0);
  return numerator / std::abs(1.0 - std::conj(lambda) * z);
}

BoundReport lemma_check(const ModelFunction& phi, double vertex_angle, double k_const, std::size_t n_samples,
                        std::uint64_t seed, const LemmaOptions& options) {
  if (n_samples < 1) throw DomainError("lemma_check: need at least one sample");
  if (!(options.min_deficit > 0.0 && options.min_deficit < 1.0)) {
    throw DomainError("lemma_check: min_deficit must lie in (0, 1)");
  }
  if (!region_nonempty(phi, k_const)) {
    std::ostringstream os;
    os << "lemma_check: S(t, K) is empty for " << phi.name() << ", K = " << k_const;
    throw SamplingFailure(os.str());
  }
  const StolzSpec vertex_spec(phi, BoundarySet::point(vertex_angle), k_const);
  const Complex t = std::polar(1.0, vertex_angle);
  const double bound = 2.0 * phi.c_const() + k_const;
  const double log_min = std::log(options.min_deficit);
  const std::size_t keep = options.keep_worst;

  auto map = [&](std::size_t begin, std::size_t end) {
    BoundReport part;
    for (std::size_t i = begin; i < end; ++i) {
      Stream rng(seed, i);
      Complex z;
      if (rng.uniform() < 0.1) {
        z = std::polar(1.0, kTwoPi * rng.uniform());
      } else {
        z = std::polar(std::sqrt(rng.uniform()), kTwoPi * rng.uniform());
      }
      bool placed = false;
      Zero lambda;
      for (int attempt = 0; attempt < 1000 && !placed; ++attempt) {
        const double deficit = std::exp(log_min * (1.0 - rng.uniform()));
        const auto window = regions::stolz_window(phi, k_const, deficit);
        if (!window || !(deficit < 1.0)) continue;
        const double offset = *window * (2.0 * rng.uniform() - 1.0);
        lambda = Zero::from_polar(deficit, vertex_angle + offset);
        placed = in_stolz(lambda, vertex_spec);
      }
      if (!placed) {
        throw SamplingFailure("lemma_check: no admissible lambda after 1000 attempts at sample " +
                              std::to_string(i));
      }
      const double lhs = lemma_lhs(z, t, lambda.value, phi);
      part.record(lhs / bound, Witness{i, z, t, lambda.value}, lhs > bound * (1.0 + options.tolerance), keep);
    }
    return part;
  };
  auto reduce = [keep](BoundReport a, BoundReport b) { return BoundReport::merge(std::move(a), b, keep); };
  return parallel_reduce(n_samples, BoundReport{}, map, reduce);
}

bool chord_check(Complex z, Complex lambda, Complex t) {
  return std::abs(t - z) <= 2.0 * std::abs(t - z * std::abs(lambda)) + 1e-14;
}

void require_zeros_in_region(const BlaschkeProduct& b, const StolzSpec& spec) {
  const auto& zeros = b.zeros();
  for (std::size_t i = 0; i < zeros.size(); ++i) {
    if (!in_stolz(zeros[i], spec)) {
      std::ostringstream os;
      os.precision(17);
      os << "zero #" << i << " (" << zeros[i].value.real() << ", " << zeros[i].value.imag()
         << ") lies outside S(E, K) for " << spec.phi.name() << ", K = " << spec.k_const;
      throw PreconditionError(os.str());
    }
  }
}

namespace {

TheoremValue theorem_value_unchecked(const BlaschkeProduct& b, Complex z, const StolzSpec& spec, double factor) {
  TheoremValue v;
  v.lhs = std::abs(b.jet(z).first);
  const double d = spec.set.distance(z);
  const double phi_d = d > 0.0 ? spec.phi(d / 6.0) : 0.0;
  const double phi_sq = phi_d * phi_d;
  v.rhs = phi_sq > 0.0 ? factor / phi_sq : std::numeric_limits<double>::infinity();
  return v;
}

double theorem_factor(const BlaschkeProduct& b, const StolzSpec& spec) {
  const double c = spec.phi.c_const();
  const double m = 2.0 * c + spec.k_const;
  return 2.0 * m * m * b.zeros().alpha();
}

}  // namespace

TheoremValue theorem_bound(const BlaschkeProduct& b, Complex z, const StolzSpec& spec) {
  if (!(std::abs(z) < 1.0)) throw DomainError("theorem_bound: need |z| < 1");
  require_zeros_in_region(b, spec);
  return theorem_value_unchecked(b, z, spec, theorem_factor(b, spec));
}

BoundReport theorem_check(const BlaschkeProduct& b, const StolzSpec& spec, std::span<const Complex> grid,
                          double tolerance, std::size_t keep_worst) {
  require_zeros_in_region(b, spec);
  for (const Complex z : grid) {
    if (!(std::abs(z) < 1.0)) throw DomainError("theorem_check: grid point outside the open disk");
  }
  const double factor = theorem_factor(b, spec);
  auto map = [&](std::size_t begin, std::size_t end) {
    BoundReport part;
    for (std::size_t i = begin; i < end; ++i) {
      const Complex z = grid[i];
      const TheoremValue v = theorem_value_unchecked(b, z, spec, factor);
      const double ratio = std::isinf(v.rhs) ? 0.0 : v.lhs / v.rhs;
      const Complex t = std::polar(1.0, spec.set.nearest_angle(std::arg(z)));
      part.record(ratio, Witness{i, z, t, Complex(0.0, 0.0)}, v.lhs > v.rhs * (1.0 + tolerance), keep_worst);
    }
    return part;
  };
  auto reduce = [keep_worst](BoundReport a, BoundReport c) { return BoundReport::merge(std::move(a), c, keep_worst); };
  return parallel_reduce(grid.size(), BoundReport{}, map, reduce);
}

double theorem_intermediate_ratio(const BlaschkeProduct& b, Complex z, const StolzSpec& spec) {
  const double left = spec.phi(spec.set.distance(z) / 6.0);
  double worst = 0.0;
  for (const Zero& lambda : b.zeros()) {
    const Complex t = std::polar(1.0, spec.set.nearest_angle(lambda.angle));
    const double right = spec.phi(std::abs(t - z * lambda.modulus()) / 3.0);
    const double ratio = right > 0.0 ? left / right : (left > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    worst = std::max(worst, ratio);
  }
  return worst;
}

double schwarz_pick_ratio(const BlaschkeProduct& b, Complex z) {
  const double q = 1.0 - std::norm(z);
  if (!(q > 0.0)) throw DomainError("schwarz_pick: need |z| < 1");
  const double lhs = std::abs(b.jet(z).first);
  const double rhs = b.one_minus_mod2(z) / q;
  if (rhs == 0.0) return lhs == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return lhs / rhs;
}

bool schwarz_pick_check(const BlaschkeProduct& b, Complex z) { return schwarz_pick_ratio(b, z) <= 1.0 + 1e-12; }

EnvelopeFit envelope_fit(const BlaschkeProduct& b, const BoundarySet& set, double rho, std::span<const Complex> grid) {
  if (!(rho > 0.0)) throw DomainError("envelope_fit: need rho > 0");
  std::vector<double> dist(grid.size());
  std::vector<double> modulus(grid.size());
  double c1 = 0.0;
  bool far_point = false;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    dist[i] = set.distance(grid[i]);
    if (!(dist[i] > 0.0)) throw DomainError("envelope_fit: grid point lies on E");
    modulus[i] = std::abs(derivative(b, grid[i]));
    if (dist[i] >= 0.5) {
      far_point = true;
      c1 = std::max(c1, modulus[i]);
    }
  }
  if (!far_point) throw DomainError("envelope_fit: grid has no point with d(z, E) >= 1/2");
  if (!(c1 > 0.0)) c1 = std::numeric_limits<double>::min();
  double c2 = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (modulus[i] > c1) {
      c2 = std::max(c2, std::pow(dist[i], rho) * std::log(modulus[i] / c1));
    }
  }
  return EnvelopeFit{c1, c2, rho, grid.size()};
}

double envelope_violation(const EnvelopeFit& fit, const BlaschkeProduct& b, const BoundarySet& set,
                          std::span<const Complex> grid) {
  double worst = 0.0;
  for (const Complex z : grid) {
    const double d = set.distance(z);
    if (!(d > 0.0)) throw DomainError("envelope_violation: grid point lies on E");
    const double envelope = fit.c1 * std::exp(fit.c2 / std::pow(d, fit.rho));
    worst = std::max(worst, std::abs(derivative(b, z)) / envelope);
  }
  return worst;
}

std::vector<Complex> polar_grid(std::span<const double> radii, std::size_t angular, double angle_offset) {
  std::vector<Complex> grid;
  grid.reserve(radii.size() * angular);
  for (const double r : radii) {
    for (std::size_t k = 0; k < angular; ++k) {
      grid.push_back(std::polar(r, angle_offset + kTwoPi * static_cast<double>(k) / static_cast<double>(angular)));
    }
  }
  return grid;
}

std::vector<Complex> sample_grid(const BoundarySet& set, std::size_t uniform, std::size_t near, std::uint64_t seed) {
  std::vector<Complex> grid;
  grid.reserve(uniform + near);
  const double log_min = std::log(1e-6);
  const double log_max = std::log(0.5);
  for (std::size_t k = 0; k < uniform + near; ++k) {
    Stream rng(seed, k);
    if (k < uniform) {
      const double r = std::min(std::sqrt(rng.uniform()), 1.0 - 1e-12);
      grid.push_back(std::polar(r, kTwoPi * rng.uniform()));
    } else {
      const double deficit = std::exp(rng.uniform(log_min, log_max));
      const double angle = set.sample_angle(rng) + rng.uniform(-3.0, 3.0) * deficit;
      grid.push_back(std::polar(1.0 - deficit, angle));
    }
  }
  return grid;
}

}  // namespace blab::bounds
