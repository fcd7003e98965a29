#include "blab/critical_points.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

namespace blab::critical {
namespace {

// W'/W at z; W = P'Q - PQ' up to a constant.
Complex log_derivative_w(const BlaschkeProduct& b, Complex z) {
  const ScaledJet j = b.scaled_jet(z);
  Complex sum = j.second / j.first;
  Complex mirror(0.0, 0.0);
  for (const Zero& zero : b.zeros()) {
    const Complex c = std::conj(zero.value);
    mirror += c / (c * z - 1.0);
  }
  return sum + 2.0 * mirror;
}

Complex reflect(Complex w) { return 1.0 / std::conj(w); }

bool sorts_before(Complex a, Complex b) {
  const double ma = std::abs(a);
  const double mb = std::abs(b);
  if (ma != mb) return ma > mb;
  return std::arg(a) < std::arg(b);
}

}  // namespace

double CriticalSet::max_residual() const {
  return residuals.empty() ? 0.0 : *std::max_element(residuals.begin(), residuals.end());
}

SumSeries SumSeries::from_terms(std::vector<double> terms) {
  SumSeries s;
  s.terms = std::move(terms);
  s.partial_sums.resize(s.terms.size());
  std::partial_sum(s.terms.begin(), s.terms.end(), s.partial_sums.begin());
  return s;
}

const RationalForm& to_rational(const BlaschkeProduct& b) {
  if (b.degree() == 0) throw DomainError("to_rational: degree-0 product");
  return b.rational();
}

CriticalSet critical_points(const BlaschkeProduct& b, const CriticalOptions& options) {
  if (b.degree() == 0) throw DomainError("critical_points: degree must be >= 1");
  const std::size_t m = b.degree() - 1;
  CriticalSet out;
  if (m == 0) return out;

  std::vector<Complex> w(m);
  for (std::size_t k = 0; k < m; ++k) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(m) + 0.4;
    w[k] = std::polar(options.initial_radius, angle);
  }

  bool converged = false;
  int iterations = 0;
  for (int iter = 1; iter <= options.max_iterations; ++iter) {
    double max_step = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      const Complex z = w[k];
      const Complex ratio = log_derivative_w(b, z);
      if (!std::isfinite(ratio.real()) || !std::isfinite(ratio.imag())) continue;  // exact root
      const Complex newton = 1.0 / ratio;
      Complex repulsion(0.0, 0.0);
      for (std::size_t j = 0; j < m; ++j) {
        if (j != k) repulsion += 1.0 / (z - w[j]);
        const Complex c = std::conj(w[j]);
        repulsion += c / (c * z - 1.0);
      }
      const Complex step = newton / (1.0 - newton * repulsion);
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) {
        // Landed on a pole of the correction (e.g. on the unit circle); nudge inward.
        w[k] = z * 0.999;
        max_step = std::max(max_step, 1e-3);
        continue;
      }
      w[k] = z - step;
      max_step = std::max(max_step, std::abs(step));
    }
    iterations = iter;
    if (max_step < options.step_tolerance) {
      converged = true;
      break;
    }
  }

  out.points.reserve(m);
  out.residuals.reserve(m);
  for (Complex z : w) {
    if (std::abs(z) > 1.0) z = reflect(z);
    double best = std::abs(b.jet(z).first);
    Complex best_z = z;
    int stalled = 0;
    for (int it = 0; it < options.newton_iterations && best > 0.0 && stalled < 3; ++it) {
      const ScaledJet j = b.scaled_jet(z);
      const Complex step = j.first / j.second;
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) break;
      z -= step;
      if (!(std::abs(z) < 1.0)) break;
      const double r = std::abs(b.jet(z).first);
      if (r < best) {
        best = r;
        best_z = z;
        stalled = 0;
      } else {
        ++stalled;
      }
      if (std::abs(step) <= 1e-17 * std::max(1.0, std::abs(z))) break;
    }
    out.points.push_back(best_z);
    out.residuals.push_back(best);
  }

  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t c) { return sorts_before(out.points[a], out.points[c]); });
  CriticalSet sorted;
  for (const std::size_t i : order) {
    sorted.points.push_back(out.points[i]);
    sorted.residuals.push_back(out.residuals[i]);
  }

  for (const Complex z : sorted.points) {
    if (!(std::abs(z) < 1.0 - options.interior_margin)) {
      throw RootFindingError("critical_points: a root cannot be separated from the unit circle", sorted,
                             converged, iterations);
    }
  }
  if (sorted.max_residual() >= options.residual_tolerance) {
    std::ostringstream os;
    os << "critical_points: residual " << sorted.max_residual() << " exceeds " << options.residual_tolerance
       << (converged ? "" : " (iteration did not converge)");
    throw RootFindingError(os.str(), sorted, converged, iterations);
  }
  return sorted;
}

int argument_principle_count(const BlaschkeProduct& b, double r, int nodes) {
  if (!(r > 0.0 && r < 1.0)) throw DomainError("argument_principle_count: need 0 < r < 1");
  if (nodes < 8) throw DomainError("argument_principle_count: need at least 8 nodes");
  Complex acc(0.0, 0.0);
  for (int k = 0; k < nodes; ++k) {
    const Complex z = std::polar(r, 2.0 * std::numbers::pi * k / nodes);
    const ScaledJet j = b.scaled_jet(z);
    if (j.first == 0.0) throw InconclusiveContourError("argument_principle_count: B' vanishes on the contour");
    acc += z * j.second / j.first;
  }
  const Complex raw = acc / static_cast<double>(nodes);
  const double rounded = std::round(raw.real());
  if (!(std::abs(raw.real() - rounded) < 0.1) || !(std::abs(raw.imag()) < 0.1)) {
    std::ostringstream os;
    os << "argument_principle_count: raw winding " << raw.real() << " + " << raw.imag() << "i at r = " << r
       << " with " << nodes << " nodes is not near an integer";
    throw InconclusiveContourError(os.str());
  }
  return static_cast<int>(rounded);
}

SumSeries critical_sum(const CriticalSet& cs, const regions::BoundarySet& set, double rho, double beta, double eps) {
  if (!(eps > 0.0)) throw DomainError("critical_sum: need eps > 0");
  const double exponent = std::max(rho - beta + eps, 0.0);
  std::vector<double> terms;
  terms.reserve(cs.size());
  for (const Complex z : cs.points) {
    terms.push_back((1.0 - std::abs(z)) * std::pow(set.distance(z), exponent));
  }
  return SumSeries::from_terms(std::move(terms));
}

SumSeries log_weighted_sum(const CriticalSet& cs, double eps) {
  if (!(eps > 0.0)) throw DomainError("log_weighted_sum: need eps > 0");
  std::vector<double> terms;
  terms.reserve(cs.size());
  for (const Complex z : cs.points) {
    const double deficit = 1.0 - std::abs(z);
    const double weight = std::max(std::log(1.0 / deficit), 1.0);
    terms.push_back(deficit / std::pow(weight, 1.0 + eps));
  }
  return SumSeries::from_terms(std::move(terms));
}

SumSeries unweighted_sum(const CriticalSet& cs) {
  std::vector<double> terms;
  terms.reserve(cs.size());
  for (const Complex z : cs.points) terms.push_back(1.0 - std::abs(z));
  return SumSeries::from_terms(std::move(terms));
}

double protas_sum(const ZeroSequence& zeros, double r) {
  if (!(r > 0.0 && r <= 1.0)) throw DomainError("protas_sum: need 0 < r <= 1");
  double sum = 0.0;
  for (const Zero& z : zeros) sum += std::pow(z.deficit, r);
  return sum;
}

}  // namespace blab::critical
