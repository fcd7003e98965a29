// Acceptance harness: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "blab/bounds_verification.hpp"
#include "blab/core_products.hpp"
#include "blab/critical_points.hpp"
#include "blab/error.hpp"
#include "blab/regions_geometry.hpp"
#include "blab/rng.hpp"
#include "blab/runner.hpp"

using namespace blab;
using blab::io::Json;
using regions::BoundarySet;
using regions::ModelFunction;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::uint64_t kSeed = 20240501;

// Criterion 1.
constexpr std::size_t kLemmaSamples = 100000;
constexpr double kLemmaSlack = 1e-12;
constexpr double kLemmaBudgetSeconds = 30.0;
// Criterion 2.
constexpr std::size_t kTheoremProducts = 100;
constexpr std::size_t kTheoremDegreeMin = 2;
constexpr std::size_t kTheoremDegreeMax = 200;
constexpr std::size_t kTheoremGridUniform = 1000;
constexpr std::size_t kTheoremGridNear = 1000;
constexpr double kTheoremSlack = 1e-9;
constexpr double kTheoremBudgetSeconds = 120.0;
// Criterion 3.
constexpr std::size_t kFdPoints = 1000;
constexpr double kFdStep = 1e-5;
constexpr double kFdMaxRelError = 1e-6;
constexpr double kFdMaxModulus = 0.99;
constexpr double kFdMinZeroDistance = 1e-2;
constexpr double kFdZeroRadius = 0.98;
// Criterion 4.
constexpr std::size_t kCriticalProducts = 50;
constexpr double kCriticalZeroRadius = 0.98;
constexpr double kCriticalMaxResidual = 1e-8;
constexpr int kContourNodes = 16384;
// Criterion 5.
constexpr double kClosedFormTolerance = 1e-10;
// Criterion 6.
constexpr double kBetaTolerance = 0.05;
constexpr int kCantorDepth = 14;
// Criterion 7.
constexpr std::size_t kSchwarzPickPairs = 10000;
constexpr double kSchwarzPickOracleSlack = 1e-9;
// Criterion 8.
constexpr std::size_t kEnvelopeZeros = 12;
constexpr double kEnvelopeMaxC2Change = 0.2;
constexpr double kEnvelopeMaxViolation = 1.1;
// Criterion 9.
constexpr double kMeansBoundedGrowth = 0.1;
constexpr double kMeansUnboundedGrowth = 0.5;
// Criterion 10.
constexpr double kSumMaxGrowth = 0.1;
constexpr double kSumEps = 0.5;

struct Verdict {
  bool pass = false;
  std::string detail;
  // Canonical text of every randomized run, compared by the determinism check.
  std::string canonical;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

Json model_json(const ModelFunction& phi) {
  switch (phi.kind()) {
    case ModelFunction::Kind::Linear:
      return {{"kind", "linear"}};
    case ModelFunction::Kind::TruncatedPower:
      return {{"kind", "truncated_power"}, {"gamma", phi.parameter()}};
    case ModelFunction::Kind::ExpTangential:
      return {{"kind", "exp_tangential"}, {"rho", phi.parameter()}};
  }
  return {};
}

runner::Outcome run(const std::string& sub, const Json& config) { return runner::execute(sub, config, "."); }

// Naive product with the conj(a)/|a| normalisation, evaluated factor by factor.
Complex naive_product(const std::vector<Complex>& zeros, Complex z) {
  Complex value = 1.0;
  for (const Complex a : zeros) value *= (std::conj(a) / std::abs(a)) * (a - z) / (1.0 - std::conj(a) * z);
  return value;
}

// B'/B = sum (|a|^2 - 1) / ((a - z)(1 - conj(a) z)).
Complex naive_derivative(const std::vector<Complex>& zeros, Complex z) {
  Complex log_derivative = 0.0;
  for (const Complex a : zeros) log_derivative += (std::norm(a) - 1.0) / ((a - z) * (1.0 - std::conj(a) * z));
  return naive_product(zeros, z) * log_derivative;
}

std::vector<Complex> disk_zeros(std::uint64_t seed, std::size_t n, double max_r) {
  std::vector<Complex> z;
  for (std::size_t k = 0; k < n; ++k) {
    Stream rng(seed, k);
    z.push_back(std::polar(max_r * std::sqrt(rng.uniform(1e-6, 1.0)), 2.0 * kPi * rng.uniform()));
  }
  return z;
}

BlaschkeProduct as_product(const std::vector<Complex>& z) { return BlaschkeProduct(ZeroSequence(std::span<const Complex>(z))); }

std::vector<ModelFunction> lemma_models() {
  return {ModelFunction::linear(),         ModelFunction::truncated_power(1.0), ModelFunction::truncated_power(2.0),
          ModelFunction::truncated_power(3.0), ModelFunction::exp_tangential(0.5), ModelFunction::exp_tangential(1.0),
          ModelFunction::exp_tangential(2.0)};
}

// -------------------------------------------------------------------------

Verdict lemma_suite() {
  const auto start = std::chrono::steady_clock::now();
  Verdict v;
  std::size_t violations = 0;
  std::size_t checked = 0;
  std::size_t vacuous = 0;
  bool certificates_ok = true;
  double worst = 0.0;
  for (const ModelFunction& phi : lemma_models()) {
    for (const double k : {0.5, 1.0, 2.0}) {
      if (!regions::region_nonempty(phi, k)) {
        // Empty region: certify phi(x) > K x on a dense log grid of (0, 1].
        for (int i = 0; i <= 2400; ++i) {
          const double x = std::pow(10.0, -12.0 + 12.0 * i / 2400.0);
          if (!(phi(x) > k * x)) certificates_ok = false;
        }
        ++vacuous;
        continue;
      }
      const Json config = {{"model", model_json(phi)}, {"K", k},          {"samples", kLemmaSamples},
                           {"seed", kSeed},            {"tolerance", kLemmaSlack}, {"csv", false}};
      const runner::Outcome o = run("verify-lemma", config);
      violations += o.violations;
      worst = std::max(worst, o.report["canonical"]["results"]["report"]["worst_ratio"].get<double>());
      v.canonical += runner::canonical_text(o.report);
      ++checked;
    }
  }
  const double elapsed = seconds_since(start);
  v.pass = violations == 0 && certificates_ok && elapsed < kLemmaBudgetSeconds;
  v.detail = std::to_string(checked) + " sampled pairs x " + std::to_string(kLemmaSamples) +
             " samples, violations=" + std::to_string(violations) + ", worst lhs/(2C+K)=" + fmt(worst) + ", " +
             std::to_string(vacuous) + " empty regions certified" + (certificates_ok ? "" : " (certificate FAILED)") +
             ", " + fmt(elapsed) + " s";
  return v;
}

Verdict theorem_suite() {
  const auto start = std::chrono::steady_clock::now();
  Verdict v;
  const std::vector<std::pair<std::string, Json>> sets = {
      {"point", {{"points", {0.0}}}},
      {"two points", {{"points", {0.0, kPi}}}},
      {"arc pi/4", {{"arcs", {{0.0, kPi / 4.0}}}}},
  };
  const std::vector<std::pair<ModelFunction, double>> models = {
      {ModelFunction::linear(), 2.0}, {ModelFunction::truncated_power(2.0), 1.0}, {ModelFunction::exp_tangential(1.0), 1.0}};
  const std::size_t runs = sets.size() * models.size();
  std::size_t products = 0;
  std::size_t violations = 0;
  std::size_t max_degree = 0;
  double worst = 0.0;
  std::size_t run_index = 0;
  for (const auto& [set_name, set] : sets) {
    for (const auto& [phi, k] : models) {
      const std::size_t count = kTheoremProducts / runs + (run_index < kTheoremProducts % runs ? 1 : 0);
      const Json config = {{"model", model_json(phi)},
                           {"K", k},
                           {"set", set},
                           {"grid", {{"uniform", kTheoremGridUniform}, {"near", kTheoremGridNear}}},
                           {"tolerance", kTheoremSlack},
                           {"csv", false},
                           {"products",
                            {{"count", count},
                             {"degree_min", kTheoremDegreeMin},
                             {"degree_max", kTheoremDegreeMax},
                             {"law", {{"kind", "power"}, {"s", 2.0}}}}},
                           {"seed", kSeed + run_index}};
      const runner::Outcome o = run("verify-theorem1", config);
      const Json& results = o.report["canonical"]["results"];
      violations += o.violations;
      worst = std::max(worst, results["report"]["worst_ratio"].get<double>());
      for (const Json& p : results["products"]) max_degree = std::max(max_degree, p["degree"].get<std::size_t>());
      products += results["products"].size();
      v.canonical += runner::canonical_text(o.report);
      ++run_index;
    }
  }
  const double elapsed = seconds_since(start);
  v.pass = violations == 0 && products == kTheoremProducts && elapsed < kTheoremBudgetSeconds;
  v.detail = std::to_string(products) + " products over 3 sets x 3 models, max degree " + std::to_string(max_degree) +
             ", " + std::to_string(kTheoremGridUniform + kTheoremGridNear) + " points each, violations=" +
             std::to_string(violations) + ", worst |B'|/bound=" + fmt(worst) + ", " + fmt(elapsed) + " s";
  return v;
}

Verdict derivative_oracle() {
  Verdict v;
  const std::vector<std::size_t> degrees = {2, 5, 10, 25, 50, 75, 100, 150, 175, 200};
  const std::size_t per_product = kFdPoints / degrees.size();
  double worst = 0.0;
  double worst_single_axis = 0.0;
  std::size_t points = 0;
  std::size_t failures = 0;
  Json record = Json::array();
  for (std::size_t i = 0; i < degrees.size(); ++i) {
    const std::vector<Complex> zeros = disk_zeros(kSeed + 100 + i, degrees[i], kFdZeroRadius);
    const BlaschkeProduct b = as_product(zeros);
    std::size_t accepted = 0;
    for (std::uint64_t k = 0; accepted < per_product; ++k) {
      Stream rng(kSeed + 200 + i, k);
      const Complex z = std::polar(kFdMaxModulus * std::sqrt(rng.uniform()), 2.0 * kPi * rng.uniform());
      double nearest = 1e300;
      for (const Complex a : zeros) nearest = std::min(nearest, std::abs(z - a));
      if (nearest <= kFdMinZeroDistance) continue;
      ++accepted;
      // Averaged real and imaginary central differences on the naive product,
      // the same stencil as derivative_fd but independent of the library.
      auto along = [&](Complex step) { return (naive_product(zeros, z + step) - naive_product(zeros, z - step)) / (2.0 * step); };
      const Complex naive_fd = 0.5 * (along(kFdStep) + along(Complex(0.0, kFdStep)));
      const Complex analytic = derivative(b, z);
      const double scale = std::abs(analytic);
      const double err = std::max(std::abs(analytic - derivative_fd(b, z, kFdStep)), std::abs(analytic - naive_fd)) / scale;
      if (!(err < kFdMaxRelError)) ++failures;
      worst = std::max(worst, err);
      // Diagnostic only: the real-axis difference alone keeps its h^2 term.
      worst_single_axis = std::max(worst_single_axis, std::abs(analytic - along(kFdStep)) / scale);
      ++points;
    }
    record.push_back(worst);
  }
  v.pass = failures == 0 && points == kFdPoints;
  v.detail = std::to_string(points) + " points, degrees 2..200, h=" + fmt(kFdStep) + ", max rel error " + fmt(worst) +
             ", failures=" + std::to_string(failures) + " (real-axis stencil alone: max rel error " +
             fmt(worst_single_axis) + ")";
  v.canonical = record.dump();
  return v;
}

Verdict critical_completeness() {
  Verdict v;
  std::size_t bad_count = 0;
  std::size_t bad_residual = 0;
  std::size_t bad_contour = 0;
  double worst_residual = 0.0;
  std::string errors;
  Json record = Json::array();
  for (std::size_t i = 0; i < kCriticalProducts; ++i) {
    Stream pick(kSeed + 300, i);
    const std::size_t n = 2 + pick.integer(0, 48);
    const BlaschkeProduct b = as_product(disk_zeros(kSeed + 400 + i, n, kCriticalZeroRadius));
    try {
      const critical::CriticalSet cs = critical::critical_points(b);
      if (cs.size() != n - 1) ++bad_count;
      double residual = 0.0;
      for (const Complex w : cs.points) residual = std::max(residual, std::abs(derivative(b, w)));
      if (!(residual < kCriticalMaxResidual)) ++bad_residual;
      worst_residual = std::max(worst_residual, residual);
      Json counts = Json::array();
      for (const double r : {0.99, 0.999}) {
        const int counted = critical::argument_principle_count(b, r, kContourNodes);
        const auto inside =
            std::count_if(cs.points.begin(), cs.points.end(), [&](Complex w) { return std::abs(w) < r; });
        if (counted != inside || counted != static_cast<int>(n - 1)) ++bad_contour;
        counts.push_back(counted);
      }
      record.push_back({{"n", n}, {"found", cs.size()}, {"contour", counts}});
    } catch (const Error& e) {
      ++bad_count;
      errors += std::string(" [") + e.what() + "]";
    }
  }
  v.pass = bad_count == 0 && bad_residual == 0 && bad_contour == 0;
  v.detail = std::to_string(kCriticalProducts) + " products, n in [2, 50]: count mismatches=" +
             std::to_string(bad_count) + ", residual failures=" + std::to_string(bad_residual) +
             " (max " + fmt(worst_residual) + "), contour disagreements=" + std::to_string(bad_contour) + errors;
  v.canonical = record.dump();
  return v;
}

Verdict closed_form() {
  Verdict v;
  v.pass = true;
  std::ostringstream detail;
  for (const double a : {0.3, 0.5, 0.9}) {
    const BlaschkeProduct b = as_product({a, -a});
    const critical::CriticalSet cs = critical::critical_points(b);
    // Hand-derived derivative, compared at a few off-origin points.
    double oracle_gap = 0.0;
    for (const Complex z : {Complex(0.2, 0.1), Complex(-0.4, 0.3), Complex(0.0, -0.6)}) {
      const Complex d = -2.0 * z * (1.0 - std::pow(a, 4)) / std::pow(1.0 - a * a * z * z, 2);
      oracle_gap = std::max(oracle_gap, std::abs(derivative(b, z) - d) / std::abs(d));
    }
    const double where = cs.size() == 1 ? std::abs(cs.points[0]) : 1e300;
    const bool ok = cs.size() == 1 && where < kClosedFormTolerance && oracle_gap < 1e-12;
    v.pass = v.pass && ok;
    detail << "a=" << a << ": count " << cs.size() << ", |w|=" << fmt(where) << ", oracle gap " << fmt(oracle_gap)
           << "; ";
  }
  v.detail = detail.str();
  return v;
}

// Box-counting dimension of the expanded generator on the dyadic grid 2^-4..2^-14.
double box_counting_beta(const regions::CantorGenerator& g) {
  const std::vector<regions::Arc> arcs = g.expand();
  std::vector<double> xs;
  std::vector<double> ys;
  for (int k = 4; k <= 14; ++k) {
    const double s = std::ldexp(1.0, -k);
    std::set<long long> boxes;
    for (const regions::Arc& a : arcs) {
      const auto lo = static_cast<long long>(std::floor(a.start / (2.0 * kPi) / s));
      const auto hi = static_cast<long long>(std::floor(a.end / (2.0 * kPi) / s));
      for (long long j = lo; j <= hi; ++j) boxes.insert(j);
    }
    xs.push_back(std::log(1.0 / s));
    ys.push_back(std::log(static_cast<double>(boxes.size())));
  }
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / ys.size();
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return 1.0 - sxy / sxx;
}

Verdict type_estimator() {
  Verdict v;
  const std::vector<double> grid = regions::default_beta_grid();
  std::ostringstream detail;
  bool ok = true;
  auto expect = [&](const std::string& name, const BoundarySet& set, double target) {
    const double beta = regions::type_beta(set, grid);
    const bool good = std::abs(beta - target) <= kBetaTolerance;
    ok = ok && good;
    detail << name << " " << fmt(beta) << (good ? "" : " (out of range)") << "; ";
  };
  expect("point", BoundarySet::point(1.0), 1.0);
  expect("three points", BoundarySet({}, {0.0, 2.0, 4.0}), 1.0);
  expect("arc pi/4", BoundarySet::arc(0.0, kPi / 4.0), 0.0);
  expect("arc 2", BoundarySet::arc(1.0, 3.0), 0.0);
  const regions::CantorGenerator g{{0.0, kPi}, 1.0 / 3.0, kCantorDepth};
  const double closed = 1.0 - std::log(2.0) / std::log(3.0);
  expect("cantor depth 14", BoundarySet({}, {}, g), closed);
  const double oracle = box_counting_beta(g);
  const bool oracle_ok = std::abs(oracle - closed) <= kBetaTolerance;
  ok = ok && oracle_ok;
  detail << "box-counting oracle " << fmt(oracle) << " vs 1-ln2/ln3=" << fmt(closed);
  v.pass = ok;
  v.detail = detail.str();
  return v;
}

Verdict schwarz_pick_suite() {
  Verdict v;
  std::size_t library_violations = 0;
  std::size_t oracle_violations = 0;
  double worst = 0.0;
  for (std::size_t i = 0; i < kSchwarzPickPairs; ++i) {
    Stream rng(kSeed + 500, i);
    const std::size_t n = 1 + rng.integer(0, 49);
    const std::vector<Complex> zeros = disk_zeros(kSeed + 600 + i, n, 0.99);
    const BlaschkeProduct b = as_product(zeros);
    const Complex z = std::polar(0.999 * std::sqrt(rng.uniform()), 2.0 * kPi * rng.uniform());
    if (!bounds::schwarz_pick_check(b, z)) ++library_violations;
    worst = std::max(worst, bounds::schwarz_pick_ratio(b, z));
    const double lhs = std::abs(naive_derivative(zeros, z)) * (1.0 - std::norm(z));
    const double rhs = 1.0 - std::norm(naive_product(zeros, z));
    if (lhs > rhs + kSchwarzPickOracleSlack) ++oracle_violations;
  }
  v.pass = library_violations == 0 && oracle_violations == 0;
  v.detail = std::to_string(kSchwarzPickPairs) + " pairs, degrees 1..50: violations=" +
             std::to_string(library_violations) + ", naive-formula violations=" + std::to_string(oracle_violations) +
             ", worst ratio " + fmt(worst);
  v.canonical = std::to_string(library_violations) + " " + fmt(worst);
  return v;
}

Verdict envelope() {
  Verdict v;
  const Json config = {{"set", {{"points", {0.0}}}},
                       {"model", {{"kind", "exp_tangential"}, {"rho", 1.0}}},
                       {"K", 1.0},
                       {"zeros", {{"law", {{"kind", "power"}, {"s", 2.0}}}, {"n", kEnvelopeZeros}}},
                       {"thresholds", {{"max_c2_change", kEnvelopeMaxC2Change}, {"max_violation", kEnvelopeMaxViolation}}},
                       {"seed", kSeed}};
  const runner::Outcome o = run("envelope-fit", config);
  const Json& r = o.report["canonical"]["results"];
  v.pass = o.violations == 0;
  v.detail = "n=" + std::to_string(kEnvelopeZeros) + ", C2 coarse " + fmt(r["coarse"]["c2"].get<double>()) +
             " refined " + fmt(r["refined"]["c2"].get<double>()) + ", change " +
             fmt(r["c2_relative_change"].get<double>()) + " (< " + fmt(kEnvelopeMaxC2Change) +
             "), held-out violation " + fmt(r["held_out_violation"].get<double>()) + " (<= " +
             fmt(kEnvelopeMaxViolation) + ")";
  v.canonical = runner::canonical_text(o.report);
  return v;
}

Verdict means_trend() {
  Verdict v;
  const Json r_grid = {0.9, 0.99, 0.999, 0.9999};
  const Json radial = {{"family", {{"kind", "radial_dyadic"}}},
                       {"p", {0.4, 0.6}},
                       {"N", {50, 100}},
                       {"r_grid", r_grid},
                       {"expectations",
                        {{"bounded", {{"p", {0.4}}, {"max_growth", kMeansBoundedGrowth}}},
                         {"unbounded", {{"p", {0.6}}, {"min_growth", kMeansUnboundedGrowth}}}}}};
  const Json tangential = {{"family",
                            {{"kind", "sampled"},
                             {"model", {{"kind", "truncated_power"}, {"gamma", 2.0}}},
                             {"K", 1.0},
                             {"set", {{"points", {0.0}}}},
                             {"law", {{"kind", "power"}, {"s", 2.0}}}}},
                           {"p", {0.2}},
                           {"N", {50, 100}},
                           {"r_grid", r_grid},
                           {"expectations", {{"bounded", {{"p", {0.2}}, {"max_growth", kMeansBoundedGrowth}}}}},
                           {"seed", kSeed}};
  const runner::Outcome a = run("means-trend", radial);
  const runner::Outcome b = run("means-trend", tangential);
  std::ostringstream detail;
  for (const Json& row : a.report["canonical"]["results"]["growth"]) {
    detail << "radial p=" << row["p"].get<double>() << " growth " << fmt(row["growth"].get<double>())
           << (row["expectation_met"].get<bool>() ? "" : " (expectation not met)") << "; ";
  }
  for (const Json& row : b.report["canonical"]["results"]["growth"]) {
    detail << "gamma=2 p=" << row["p"].get<double>() << " growth " << fmt(row["growth"].get<double>())
           << (row["expectation_met"].get<bool>() ? "" : " (expectation not met)") << "; ";
  }
  detail << "thresholds <" << fmt(kMeansBoundedGrowth) << " bounded, >" << fmt(kMeansUnboundedGrowth) << " unbounded";
  v.pass = a.violations == 0 && b.violations == 0;
  v.detail = detail.str();
  v.canonical = runner::canonical_text(a.report) + runner::canonical_text(b.report);
  return v;
}

Verdict critical_sum_trend() {
  Verdict v;
  const Json config = {{"set", {{"points", {0.0}}}},
                       {"model", {{"kind", "exp_tangential"}, {"rho", 1.0}}},
                       {"K", 1.0},
                       {"zeros", {{"law", {{"kind", "power"}, {"s", 1.5}}}, {"n", 100}}},
                       {"rho", 1.0},
                       {"beta", 1.0},
                       {"eps", kSumEps},
                       {"truncations", {25, 50, 100}},
                       {"max_growth", kSumMaxGrowth},
                       {"seed", kSeed}};
  const runner::Outcome o = run("critical-sum", config);
  std::ostringstream detail;
  for (const Json& row : o.report["canonical"]["results"]["rows"]) {
    detail << "N=" << row["N"].get<std::size_t>() << " sum " << fmt(row["weighted_sum"].get<double>());
    if (row.contains("growth")) detail << " growth " << fmt(row["growth"].get<double>());
    detail << " unweighted " << fmt(row["unweighted_sum"].get<double>()) << "; ";
  }
  v.pass = o.violations == 0;
  v.detail = detail.str() + "max growth " + fmt(kSumMaxGrowth);
  v.canonical = runner::canonical_text(o.report);
  return v;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Verdict()> check;
    bool randomized;
  };
  const std::vector<Criterion> criteria = {
      {"AC1 lemma bound", lemma_suite, true},
      {"AC2 derivative bound", theorem_suite, true},
      {"AC3 derivative oracle", derivative_oracle, true},
      {"AC4 critical-point completeness", critical_completeness, true},
      {"AC5 symmetric pair", closed_form, false},
      {"AC6 type estimator", type_estimator, false},
      {"AC7 Schwarz-Pick", schwarz_pick_suite, true},
      {"AC8 envelope fit", envelope, true},
      {"AC9 Hardy means trend", means_trend, true},
      {"AC10 weighted critical sum", critical_sum_trend, true},
  };

  int failures = 0;
  std::map<std::string, std::string> first_canonical;
  for (const Criterion& c : criteria) {
    Verdict v;
    try {
      v = c.check();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string("error: ") + e.what();
    }
    if (!v.pass) ++failures;
    if (c.randomized) first_canonical[c.name] = v.canonical;
    std::cout << (v.pass ? "PASS " : "FAIL ") << c.name << ": " << v.detail << std::endl;
  }

  // Rerun every randomized criterion with the same seeds and a different
  // worker count; canonical output must match byte for byte.
  ::setenv("BLAB_THREADS", "3", 1);
  std::size_t mismatches = 0;
  std::string which;
  std::size_t compared = 0;
  for (const Criterion& c : criteria) {
    if (!c.randomized) continue;
    std::string again;
    try {
      again = c.check().canonical;
    } catch (const std::exception& e) {
      again = std::string("error: ") + e.what();
    }
    ++compared;
    if (again != first_canonical[c.name] || again.empty()) {
      ++mismatches;
      which += std::string(" ") + c.name;
    }
  }
  ::unsetenv("BLAB_THREADS");
  const bool deterministic = mismatches == 0;
  if (!deterministic) ++failures;
  std::cout << (deterministic ? "PASS " : "FAIL ") << "AC11 determinism: " << compared
            << " randomized runs repeated with BLAB_THREADS=3, mismatches=" << mismatches << which << std::endl;

  std::cout << (failures == 0 ? "ALL PASS" : std::to_string(failures) + " criteria FAILED") << std::endl;
  return failures == 0 ? 0 : 1;
}
