#include "blab/regions_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "blab/error.hpp"

namespace blab::regions {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kMaxAttemptsPerZero = 1000;

double wrap_angle(double angle) {
  double a = std::fmod(angle, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  if (a >= kTwoPi) a -= kTwoPi;
  return a;
}

void push_normalised(std::vector<Arc>& out, const Arc& arc, bool& full) {
  if (!std::isfinite(arc.start) || !std::isfinite(arc.end) || arc.end < arc.start) {
    throw DomainError("boundary set: arc needs finite start <= end");
  }
  const double length = arc.end - arc.start;
  if (length >= kTwoPi) {
    full = true;
    return;
  }
  const double s = wrap_angle(arc.start);
  const double e = s + length;
  if (e > kTwoPi) {
    out.push_back({s, kTwoPi});
    out.push_back({0.0, e - kTwoPi});
  } else {
    out.push_back({s, e});
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Model functions

ModelFunction::ModelFunction(Kind kind, double parameter) : kind_(kind), parameter_(parameter) {
  switch (kind_) {
    case Kind::Linear:
      c_const_ = 1.0;
      break;
    case Kind::TruncatedPower:
      if (!(parameter >= 1.0) || !std::isfinite(parameter)) {
        throw DomainError("truncated power model needs gamma >= 1");
      }
      c_const_ = std::exp2(parameter - 1.0);
      break;
    case Kind::ExpTangential:
      if (!(parameter > 0.0) || !std::isfinite(parameter)) {
        throw DomainError("exponential model needs rho > 0");
      }
      // exp(-x^-rho)/x peaks at x = rho^(1/rho).
      c_const_ = std::pow(std::numbers::e * parameter, -1.0 / parameter);
      break;
  }
}

ModelFunction ModelFunction::linear() { return ModelFunction(Kind::Linear, 1.0); }
ModelFunction ModelFunction::truncated_power(double gamma) { return ModelFunction(Kind::TruncatedPower, gamma); }
ModelFunction ModelFunction::exp_tangential(double rho) { return ModelFunction(Kind::ExpTangential, rho); }

double ModelFunction::operator()(double x) const {
  if (!(x >= 0.0)) {
    throw DomainError("model function evaluated at a negative argument");
  }
  switch (kind_) {
    case Kind::Linear:
      return x;
    case Kind::TruncatedPower:
      return x <= 2.0 ? std::pow(x, parameter_) : c_const_ * x;
    case Kind::ExpTangential:
      return x == 0.0 ? 0.0 : std::exp(-std::pow(x, -parameter_));
  }
  return 0.0;
}

double ModelFunction::inverse(double y) const {
  if (!(y > 0.0)) return 0.0;
  switch (kind_) {
    case Kind::Linear:
      return y;
    case Kind::TruncatedPower:
      return y <= std::exp2(parameter_) ? std::pow(y, 1.0 / parameter_) : y / c_const_;
    case Kind::ExpTangential:
      if (y >= 1.0) return std::numeric_limits<double>::infinity();
      return std::pow(-std::log(y), -1.0 / parameter_);
  }
  return 0.0;
}

std::string ModelFunction::name() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::Linear:
      os << "linear";
      break;
    case Kind::TruncatedPower:
      os << "truncated_power(gamma=" << parameter_ << ")";
      break;
    case Kind::ExpTangential:
      os << "exp_tangential(rho=" << parameter_ << ")";
      break;
  }
  return os.str();
}

double model_eval(const ModelFunction& phi, double x) { return phi(x); }

double model_constant(const ModelFunction& phi) { return phi.c_const(); }

// ---------------------------------------------------------------------------
// Boundary sets

std::vector<Arc> CantorGenerator::expand() const {
  if (!(ratio > 0.0 && ratio < 0.5)) throw DomainError("cantor ratio must lie in (0, 1/2)");
  if (depth < 0 || depth > 24) throw DomainError("cantor depth must lie in [0, 24]");
  if (!(base.end > base.start) || base.end - base.start >= kTwoPi) {
    throw DomainError("cantor base arc must have length in (0, 2 pi)");
  }
  std::vector<Arc> level{base};
  for (int d = 0; d < depth; ++d) {
    std::vector<Arc> next;
    next.reserve(level.size() * 2);
    for (const Arc& a : level) {
      const double child = (a.end - a.start) * ratio;
      next.push_back({a.start, a.start + child});
      next.push_back({a.end - child, a.end});
    }
    level = std::move(next);
  }
  return level;
}

double CantorGenerator::finest_length() const { return (base.end - base.start) * std::pow(ratio, depth); }

BoundarySet::BoundarySet(std::vector<Arc> arcs, std::vector<double> points, std::optional<CantorGenerator> cantor)
    : arcs_(std::move(arcs)), points_(std::move(points)), cantor_(std::move(cantor)) {
  if (arcs_.empty() && points_.empty() && !cantor_) {
    throw DomainError("boundary set must be nonempty");
  }
  std::vector<Arc> raw;
  for (const Arc& a : arcs_) push_normalised(raw, a, full_);
  for (const double p : points_) {
    if (!std::isfinite(p)) throw DomainError("boundary set: non-finite point angle");
    const double w = wrap_angle(p);
    raw.push_back({w, w});
  }
  if (cantor_) {
    for (const Arc& a : cantor_->expand()) push_normalised(raw, a, full_);
  }
  if (full_) {
    components_ = {{0.0, kTwoPi}};
    return;
  }
  std::sort(raw.begin(), raw.end(), [](const Arc& a, const Arc& b) {
    return a.start < b.start || (a.start == b.start && a.end < b.end);
  });
  for (const Arc& a : raw) {
    if (!components_.empty() && a.start <= components_.back().end) {
      components_.back().end = std::max(components_.back().end, a.end);
    } else {
      components_.push_back(a);
    }
  }
  if (components_.size() == 1 && components_[0].start == 0.0 && components_[0].end == kTwoPi) {
    full_ = true;
  }
}

double BoundarySet::angular_gap(double angle) const {
  if (full_) return 0.0;
  const double theta = wrap_angle(angle);
  const auto it = std::upper_bound(components_.begin(), components_.end(), theta,
                                   [](double v, const Arc& a) { return v < a.start; });
  const std::size_t idx = static_cast<std::size_t>(it - components_.begin());
  double behind = 0.0;
  if (idx > 0) {
    const Arc& prev = components_[idx - 1];
    if (theta <= prev.end) return 0.0;
    behind = theta - prev.end;
  } else {
    behind = theta + kTwoPi - components_.back().end;
  }
  const double ahead = idx < components_.size() ? components_[idx].start - theta : components_.front().start + kTwoPi - theta;
  return std::min({behind, ahead, std::numbers::pi});
}

double BoundarySet::nearest_angle(double angle) const {
  if (full_) return wrap_angle(angle);
  const double theta = wrap_angle(angle);
  const auto it = std::upper_bound(components_.begin(), components_.end(), theta,
                                   [](double v, const Arc& a) { return v < a.start; });
  const std::size_t idx = static_cast<std::size_t>(it - components_.begin());
  const Arc& prev = idx > 0 ? components_[idx - 1] : components_.back();
  const Arc& next = idx < components_.size() ? components_[idx] : components_.front();
  if (idx > 0 && theta <= prev.end) return theta;
  const double behind = idx > 0 ? theta - prev.end : theta + kTwoPi - prev.end;
  const double ahead = idx < components_.size() ? next.start - theta : next.start + kTwoPi - theta;
  return behind <= ahead ? prev.end : next.start;
}

double BoundarySet::distance_polar(double deficit, double angle) const {
  const double psi = angular_gap(angle);
  const double r = 1.0 - deficit;
  const double s = std::sin(0.5 * psi);
  return std::sqrt(deficit * deficit + 4.0 * r * s * s);
}

double BoundarySet::distance(Complex z) const { return distance_polar(1.0 - std::abs(z), std::arg(z)); }

double BoundarySet::neighborhood_measure(double x) const {
  if (!(x > 0.0)) throw DomainError("neighborhood_measure: need x > 0");
  if (full_ || x >= 2.0) return 1.0;
  const double widen = 2.0 * std::asin(0.5 * x);
  // The complement of E_x is what survives of each gap after trimming both ends.
  double uncovered = 0.0;
  for (std::size_t i = 0; i < components_.size(); ++i) {
    const double next_start = i + 1 < components_.size() ? components_[i + 1].start : components_[0].start + kTwoPi;
    const double gap = next_start - components_[i].end;
    uncovered += std::max(0.0, gap - 2.0 * widen);
  }
  return std::clamp(1.0 - uncovered / kTwoPi, 0.0, 1.0);
}

double BoundarySet::sample_angle(Stream& rng) const {
  const std::size_t idx = static_cast<std::size_t>(rng.integer(0, components_.size() - 1));
  const Arc& c = components_[idx];
  return c.start + (c.end - c.start) * rng.uniform();
}

bool BoundarySet::subset_of(const BoundarySet& other) const {
  if (other.full_) return true;
  for (const Arc& c : components_) {
    const bool covered = std::any_of(other.components_.begin(), other.components_.end(),
                                     [&](const Arc& o) { return o.start <= c.start && c.end <= o.end; });
    if (!covered) return false;
  }
  return true;
}

double distance(DiskPoint z, const BoundarySet& set) { return set.distance(z); }

double distance(const Zero& z, const BoundarySet& set) { return set.distance_polar(z.deficit, z.angle); }

double neighborhood_measure(const BoundarySet& set, double x) { return set.neighborhood_measure(x); }

// ---------------------------------------------------------------------------
// Stolz regions

StolzSpec::StolzSpec(ModelFunction phi_in, BoundarySet set_in, double k)
    : phi(std::move(phi_in)), set(std::move(set_in)), k_const(k) {
  if (!(k_const > 0.0) || !std::isfinite(k_const)) {
    throw DomainError("Stolz region needs K > 0");
  }
}

bool in_stolz(const Zero& lambda, const StolzSpec& spec) {
  const double d = distance(lambda, spec.set);
  return spec.phi(d) <= spec.k_const * lambda.deficit * (1.0 + kMembershipSlack);
}

bool in_stolz(DiskPoint lambda, const StolzSpec& spec) {
  const double modulus = std::abs(lambda);
  if (!(modulus < 1.0)) throw DomainError("in_stolz: |lambda| >= 1");
  const double deficit = 1.0 - modulus;
  const double d = spec.set.distance_polar(deficit, std::arg(lambda));
  return spec.phi(d) <= spec.k_const * deficit * (1.0 + kMembershipSlack);
}

std::optional<double> angular_window(double deficit, double chord) {
  if (!(chord >= deficit)) return std::nullopt;
  const double r = 1.0 - deficit;
  if (r <= 0.0) return std::numbers::pi;
  const double half_sin_sq = (chord - deficit) * (chord + deficit) / (4.0 * r);
  if (!(half_sin_sq < 1.0)) return std::numbers::pi;
  return 2.0 * std::asin(std::sqrt(half_sin_sq));
}

std::optional<double> stolz_window(const ModelFunction& phi, double k_const, double deficit) {
  return angular_window(deficit, std::min(2.0, phi.inverse(k_const * deficit)));
}

bool region_nonempty(const ModelFunction& phi, double k_const) {
  for (double delta = 1.0; delta > 0.0; delta *= 0.5) {
    if (phi(delta) <= k_const * delta * (1.0 + kMembershipSlack)) return true;
  }
  return false;
}

std::vector<DiskPoint> region_boundary(const StolzSpec& spec, double vertex_angle, int resolution) {
  if (resolution < 2) throw DomainError("region_boundary: resolution must be >= 2");
  const Complex t = std::polar(1.0, vertex_angle);
  constexpr int kScan = 256;
  std::vector<DiskPoint> out;
  out.reserve(static_cast<std::size_t>(resolution));
  for (int j = 0; j < resolution; ++j) {
    const double alpha = -0.5 * std::numbers::pi + std::numbers::pi * (j + 0.5) / resolution;
    const Complex e = std::polar(1.0, alpha);
    const double exit = 2.0 * std::cos(alpha);
    // lambda = t (1 - s e^{i alpha}); |t - lambda| = s.
    auto excess = [&](double s) {
      const double modulus = std::abs(1.0 - s * e);
      const double deficit = (2.0 * s * std::cos(alpha) - s * s) / (1.0 + modulus);
      return spec.phi(s) - spec.k_const * deficit;
    };
    int last_inside = 0;
    for (int i = kScan - 1; i >= 1; --i) {
      if (excess(exit * i / kScan) <= 0.0) {
        last_inside = i;
        break;
      }
    }
    double s_star = 0.0;
    if (last_inside > 0) {
      double lo = exit * last_inside / kScan;
      double hi = exit * (last_inside + 1) / kScan;
      while (hi - lo > 1e-13) {
        const double mid = 0.5 * (lo + hi);
        (excess(mid) <= 0.0 ? lo : hi) = mid;
      }
      s_star = lo;
    }
    out.push_back(t * (1.0 - s_star * e));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Sampling

double RadialLaw::deficit(std::size_t k) const {
  const double kk = static_cast<double>(k);
  return kind == Kind::Geometric ? std::pow(parameter, kk) : std::pow(kk + 1.0, -parameter);
}

void RadialLaw::validate() const {
  if (kind == Kind::Geometric && !(parameter > 0.0 && parameter < 1.0)) {
    throw DomainError("geometric radial law needs 0 < q < 1");
  }
  if (kind == Kind::Power && !(parameter > 1.0 && std::isfinite(parameter))) {
    throw DomainError("power radial law needs s > 1 for a summable deficit sequence");
  }
}

ZeroSequence sample_zeros(const StolzSpec& spec, std::size_t n, std::uint64_t seed, const RadialLaw& law) {
  if (n < 1) throw DomainError("sample_zeros: n must be >= 1");
  law.validate();
  std::vector<Zero> zeros;
  zeros.reserve(n);
  for (std::size_t k = 1; k <= n; ++k) {
    const double deficit = law.deficit(k);
    if (!(deficit > 0.0)) {
      throw SamplingFailure("sample_zeros: radial law underflows at index " + std::to_string(k));
    }
    const auto window = stolz_window(spec.phi, spec.k_const, deficit);
    if (!window) {
      std::ostringstream os;
      os.precision(6);
      os << "sample_zeros: region too thin at index " << k << ": 1-|z| = " << deficit << ", phi(1-|z|) = "
         << spec.phi(deficit) << " > K(1-|z|) = " << spec.k_const * deficit << " for " << spec.phi.name();
      throw SamplingFailure(os.str());
    }
    Stream rng(seed, k);
    bool placed = false;
    for (int attempt = 0; attempt < kMaxAttemptsPerZero && !placed; ++attempt) {
      const double vertex = spec.set.sample_angle(rng);
      const double offset = *window * (2.0 * rng.uniform() - 1.0);
      const Zero candidate = Zero::from_polar(deficit, wrap_angle(vertex + offset));
      if (in_stolz(candidate, spec)) {
        zeros.push_back(candidate);
        placed = true;
      }
    }
    if (!placed) {
      throw SamplingFailure("sample_zeros: no admissible angle after 1000 attempts at index " + std::to_string(k));
    }
  }
  return ZeroSequence(std::move(zeros));
}

// ---------------------------------------------------------------------------
// Type

std::vector<double> default_beta_grid() {
  std::vector<double> grid;
  for (int k = 4; k <= 14; ++k) grid.push_back(std::ldexp(1.0, -k));
  return grid;
}

double type_beta(const BoundarySet& set, const std::vector<double>& x_grid) {
  if (x_grid.size() < 4) throw DomainError("type_beta: grid needs at least 4 points");
  for (std::size_t i = 0; i < x_grid.size(); ++i) {
    if (!(x_grid[i] > 0.0 && x_grid[i] < 1.0)) throw DomainError("type_beta: grid values must lie in (0, 1)");
    if (i > 0 && !(x_grid[i] < x_grid[i - 1])) throw DomainError("type_beta: grid must be strictly decreasing");
  }
  if (set.cantor()) {
    const double needed = std::ceil(std::log2(1.0 / x_grid.back()) - 1e-9);
    if (set.cantor()->depth < needed) {
      throw DomainError("type_beta: Cantor depth " + std::to_string(set.cantor()->depth) +
                        " is below the dyadic depth " + std::to_string(static_cast<int>(needed)) +
                        " of the smallest grid value");
    }
  }
  const double n = static_cast<double>(x_grid.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const double x : x_grid) {
    const double lx = std::log(x);
    const double ly = std::log(set.neighborhood_measure(x));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace blab::regions
