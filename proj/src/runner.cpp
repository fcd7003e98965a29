#include "blab/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <limits>
#include <ostream>
#include <set>
#include <string_view>

#include "blab/bounds_verification.hpp"
#include "blab/critical_points.hpp"
#include "blab/integral_means.hpp"
#include "blab/parallel.hpp"
#include "blab/regions_geometry.hpp"
#include "blab/rng.hpp"

namespace blab::runner {
namespace {

using io::Json;
using regions::BoundarySet;
using regions::ModelFunction;
using regions::RadialLaw;
using regions::StolzSpec;

constexpr const char* kVersion = "0.1.0";

// View onto one JSON object of the config; remembers which keys were read so
// that finish() can reject the rest.
class Node {
 public:
  Node(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
  }

  [[nodiscard]] std::string field(std::string_view key) const {
    return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
  }
  [[nodiscard]] bool has(const std::string& key) const { return j_.contains(key); }

  const Json& raw(const std::string& key) {
    used_.insert(key);
    if (!has(key)) throw ConfigError(field(key), "is required");
    return j_.at(key);
  }

  double number(const std::string& key) {
    const Json& v = raw(key);
    if (!v.is_number()) throw ConfigError(field(key), "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(field(key), "must be finite");
    return x;
  }
  double number(const std::string& key, double fallback) { return has(key) ? number(key) : mark(key, fallback); }

  double positive(const std::string& key) {
    const double x = number(key);
    if (!(x > 0.0)) throw ConfigError(field(key), "must be positive");
    return x;
  }
  double positive(const std::string& key, double fallback) { return has(key) ? positive(key) : mark(key, fallback); }

  static bool non_negative_integer(const Json& v) {
    return v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
  }

  std::uint64_t count(const std::string& key) {
    const Json& v = raw(key);
    if (!non_negative_integer(v)) throw ConfigError(field(key), "expected a non-negative integer");
    return v.get<std::uint64_t>();
  }
  std::uint64_t count(const std::string& key, std::uint64_t fallback) {
    return has(key) ? count(key) : mark(key, fallback);
  }

  std::string text(const std::string& key) {
    const Json& v = raw(key);
    if (!v.is_string()) throw ConfigError(field(key), "expected a string");
    return v.get<std::string>();
  }
  std::string text(const std::string& key, std::string fallback) { return has(key) ? text(key) : mark(key, fallback); }

  bool flag(const std::string& key, bool fallback) {
    if (!has(key)) return mark(key, fallback);
    const Json& v = raw(key);
    if (!v.is_boolean()) throw ConfigError(field(key), "expected true or false");
    return v.get<bool>();
  }

  std::vector<double> numbers(const std::string& key) {
    const Json& v = raw(key);
    if (!v.is_array() || v.empty()) throw ConfigError(field(key), "expected a non-empty array of numbers");
    std::vector<double> out;
    for (const Json& x : v) {
      if (!x.is_number() || !std::isfinite(x.get<double>())) throw ConfigError(field(key), "expected numbers");
      out.push_back(x.get<double>());
    }
    return out;
  }
  std::vector<double> numbers(const std::string& key, std::vector<double> fallback) {
    return has(key) ? numbers(key) : mark(key, std::move(fallback));
  }

  std::vector<std::size_t> counts(const std::string& key) {
    const Json& v = raw(key);
    if (!v.is_array() || v.empty()) throw ConfigError(field(key), "expected a non-empty array of integers");
    std::vector<std::size_t> out;
    for (const Json& x : v) {
      if (!non_negative_integer(x)) throw ConfigError(field(key), "expected non-negative integers");
      out.push_back(x.get<std::size_t>());
    }
    return out;
  }

  Node child(const std::string& key) { return Node(raw(key), field(key)); }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!used_.count(key)) throw ConfigError(field(key), "unknown field");
    }
  }

 private:
  template <class T>
  T mark(const std::string& key, T value) {
    used_.insert(key);
    return value;
  }

  const Json& j_;
  std::string path_;
  std::set<std::string> used_;
};

struct Context {
  std::filesystem::path base_dir;
  std::optional<std::uint64_t> seed_override;
  std::optional<std::uint64_t> seed_used;

  std::uint64_t seed(Node& root) {
    if (seed_override) {
      if (root.has("seed")) root.raw("seed");
      seed_used = *seed_override;
    } else {
      if (!root.has("seed")) throw ConfigError("seed", "is required for randomized experiments");
      seed_used = root.count("seed");
    }
    return *seed_used;
  }

  [[nodiscard]] std::filesystem::path resolve(const std::string& p) const {
    const std::filesystem::path path(p);
    return path.is_absolute() ? path : base_dir / path;
  }
};

struct Result {
  Json results = Json::object();
  std::size_t violations = 0;
  std::vector<std::pair<std::string, std::string>> files;
};

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag, std::uint64_t index) {
  return mix64(mix64(seed ^ tag) + index);
}

ModelFunction parse_model(Node n) {
  const std::string kind = n.text("kind");
  try {
    if (kind == "linear") {
      n.finish();
      return ModelFunction::linear();
    }
    if (kind == "truncated_power") {
      const double gamma = n.number("gamma");
      n.finish();
      return ModelFunction::truncated_power(gamma);
    }
    if (kind == "exp_tangential") {
      const double rho = n.number("rho");
      n.finish();
      return ModelFunction::exp_tangential(rho);
    }
  } catch (const DomainError& e) {
    throw ConfigError(n.field(kind == "truncated_power" ? "gamma" : "rho"), e.what());
  }
  throw ConfigError(n.field("kind"), "expected linear, truncated_power or exp_tangential");
}

BoundarySet parse_set(Node& parent, const Context& ctx) {
  const Json& value = parent.raw("set");
  const std::string field = parent.field("set");
  try {
    if (value.is_object() && value.contains("file")) {
      Node s(value, field);
      const std::string file = s.text("file");
      s.finish();
      return io::read_boundary_set(ctx.resolve(file));
    }
    return io::boundary_from_json(value);
  } catch (const ParseError& e) {
    throw ConfigError(field, e.what());
  }
}

RadialLaw parse_law(Node n) {
  const std::string kind = n.text("kind");
  RadialLaw law;
  if (kind == "geometric") {
    law = RadialLaw::geometric(n.number("q"));
  } else if (kind == "power") {
    law = RadialLaw::power(n.number("s"));
  } else {
    throw ConfigError(n.field("kind"), "expected geometric or power");
  }
  n.finish();
  try {
    law.validate();
  } catch (const DomainError& e) {
    throw ConfigError(n.field(kind == "geometric" ? "q" : "s"), e.what());
  }
  return law;
}

double parse_k(Node& root) { return root.positive("K"); }

StolzSpec parse_region(Node& root, const Context& ctx) {
  const ModelFunction phi = parse_model(root.child("model"));
  const double k = parse_k(root);
  return StolzSpec(phi, parse_set(root, ctx), k);
}

// Zeros from {"file": path} or sampled from {"law": {...}, "n": count} inside
// the region given by the caller.
struct ZeroSource {
  std::optional<std::filesystem::path> file;
  std::optional<RadialLaw> law;
  std::size_t n = 0;

  [[nodiscard]] bool sampled() const { return law.has_value(); }
};

ZeroSource parse_zero_source(Node n, const Context& ctx) {
  ZeroSource src;
  if (n.has("file")) {
    src.file = ctx.resolve(n.text("file"));
  } else {
    src.law = parse_law(n.child("law"));
    src.n = n.count("n");
    if (src.n < 1) throw ConfigError(n.field("n"), "must be at least 1");
  }
  n.finish();
  return src;
}

ZeroSequence load_zeros(const ZeroSource& src, const std::optional<StolzSpec>& region, std::uint64_t seed) {
  if (src.file) {
    try {
      return io::read_zero_set(*src.file);
    } catch (const ParseError& e) {
      throw ConfigError("zeros.file", e.what());
    }
  }
  return regions::sample_zeros(*region, src.n, seed, *src.law);
}

Json points_json(std::span<const Complex> points) {
  Json out = Json::array();
  for (const Complex z : points) out.push_back(io::complex_json(z));
  return out;
}

double relative_change(double from, double to) {
  const double scale = std::max(std::abs(from), std::abs(to));
  return scale > 0.0 ? std::abs(to - from) / scale : 0.0;
}

// --- subcommands -----------------------------------------------------------

Result verify_lemma(Node& root, Context& ctx) {
  const ModelFunction phi = parse_model(root.child("model"));
  const double k = parse_k(root);
  const double vertex = root.number("vertex", 0.0);
  const std::uint64_t samples = root.count("samples");
  if (samples < 1) throw ConfigError("samples", "must be at least 1");
  bounds::LemmaOptions options;
  options.tolerance = root.positive("tolerance", options.tolerance);
  options.min_deficit = root.positive("min_deficit", options.min_deficit);
  options.keep_worst = root.count("keep_worst", options.keep_worst);
  const bool csv = root.flag("csv", true);
  const std::uint64_t seed = ctx.seed(root);
  root.finish();

  const bounds::BoundReport report = bounds::lemma_check(phi, vertex, k, samples, seed, options);
  Result r;
  r.results = {{"C", phi.c_const()}, {"bound", 2.0 * phi.c_const() + k}, {"report", io::to_json(report)}};
  r.violations = report.violations;
  if (csv) r.files.emplace_back("verify-lemma.csv", io::worst_csv(report));
  return r;
}


Result verify_theorem1(Node& root, Context& ctx) {
  const StolzSpec spec = parse_region(root, ctx);
  std::size_t uniform = 1000;
  std::size_t near = 1000;
  if (root.has("grid")) {
    Node g = root.child("grid");
    uniform = g.count("uniform", uniform);
    near = g.count("near", near);
    g.finish();
  }
  if (uniform + near == 0) throw ConfigError("grid", "needs at least one point");
  const double tolerance = root.positive("tolerance", 1e-9);
  const std::size_t keep = root.count("keep_worst", bounds::kDefaultWorstKept);
  const bool csv = root.flag("csv", true);

  // One product from "zeros", or a batch from "products".
  std::optional<ZeroSource> single;
  std::size_t batch = 0;
  std::size_t degree_min = 0;
  std::size_t degree_max = 0;
  std::optional<RadialLaw> batch_law;
  if (root.has("zeros") == root.has("products")) {
    throw ConfigError("zeros", "exactly one of 'zeros' and 'products' is required");
  }
  if (root.has("zeros")) {
    single = parse_zero_source(root.child("zeros"), ctx);
  } else {
    Node p = root.child("products");
    batch = p.count("count");
    degree_min = p.count("degree_min");
    degree_max = p.count("degree_max");
    batch_law = parse_law(p.child("law"));
    p.finish();
    if (batch < 1) throw ConfigError("products.count", "must be at least 1");
    if (degree_min < 1 || degree_max < degree_min) {
      throw ConfigError("products.degree_max", "need 1 <= degree_min <= degree_max");
    }
  }
  const std::uint64_t seed = ctx.seed(root);
  root.finish();

  Result r;
  bounds::BoundReport total;
  Json products = Json::array();
  const std::size_t count = single ? 1 : batch;
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint64_t product_seed = derive_seed(seed, 0x7a6f, i);
    ZeroSequence zeros;
    if (single) {
      zeros = load_zeros(*single, spec, product_seed);
    } else {
      Stream pick(product_seed, 0);
      const std::size_t degree = degree_min + pick.integer(0, degree_max - degree_min);
      zeros = regions::sample_zeros(spec, degree, product_seed, *batch_law);
    }
    const BlaschkeProduct b(std::move(zeros));
    const std::vector<Complex> grid = bounds::sample_grid(spec.set, uniform, near, derive_seed(seed, 0x671d, i));
    const bounds::BoundReport report = bounds::theorem_check(b, spec, grid, tolerance, keep);
    products.push_back({{"index", i},
                        {"degree", b.degree()},
                        {"alpha", b.zeros().alpha()},
                        {"samples", report.samples},
                        {"violations", report.violations},
                        {"worst_ratio", report.worst_ratio}});
    total = bounds::BoundReport::merge(std::move(total), report, keep);
  }
  r.results = {{"C", spec.phi.c_const()},
               {"constant", 2.0 * std::pow(2.0 * spec.phi.c_const() + spec.k_const, 2)},
               {"products", products},
               {"report", io::to_json(total)}};
  r.violations = total.violations;
  if (csv) r.files.emplace_back("verify-theorem1.csv", io::worst_csv(total));
  return r;
}

// Zeros plus the optional region they are sampled from.
struct ZeroInput {
  ZeroSource source;
  std::optional<StolzSpec> region;
};

ZeroInput parse_zero_input(Node& root, Context& ctx, const std::optional<BoundarySet>& set) {
  ZeroInput in{parse_zero_source(root.child("zeros"), ctx), std::nullopt};
  if (in.source.sampled()) {
    const ModelFunction phi = parse_model(root.child("model"));
    const double k = parse_k(root);
    in.region = StolzSpec(phi, set ? *set : parse_set(root, ctx), k);
  }
  return in;
}

critical::CriticalOptions parse_critical_options(Node& root) {
  critical::CriticalOptions options;
  if (root.has("solver")) {
    Node s = root.child("solver");
    options.max_iterations = static_cast<int>(s.count("max_iterations", static_cast<std::uint64_t>(options.max_iterations)));
    options.step_tolerance = s.positive("step_tolerance", options.step_tolerance);
    options.residual_tolerance = s.positive("residual_tolerance", options.residual_tolerance);
    s.finish();
  }
  return options;
}

Json critical_json(const critical::CriticalSet& cs) {
  return {{"count", cs.size()}, {"points", points_json(cs.points)}, {"residuals", cs.residuals},
          {"max_residual", cs.max_residual()}};
}

Result critical_points_cmd(Node& root, Context& ctx) {
  const ZeroInput in = parse_zero_input(root, ctx, std::nullopt);
  const critical::CriticalOptions options = parse_critical_options(root);
  std::vector<double> contour_radii;
  int contour_nodes = 0;
  if (root.has("contour")) {
    Node c = root.child("contour");
    contour_radii = c.numbers("radii");
    contour_nodes = static_cast<int>(c.count("nodes", 8192));
    c.finish();
    for (const double r : contour_radii) {
      if (!(r > 0.0 && r < 1.0)) throw ConfigError("contour.radii", "radii must lie in (0, 1)");
    }
  }
  const std::uint64_t seed = in.source.sampled() ? ctx.seed(root) : 0;
  root.finish();

  const BlaschkeProduct b(load_zeros(in.source, in.region, seed));
  const critical::CriticalSet cs = critical::critical_points(b, options);
  Result r;
  r.results = critical_json(cs);
  r.results["degree"] = b.degree();
  if (cs.size() + 1 != b.degree()) ++r.violations;
  Json contour = Json::array();
  for (const double radius : contour_radii) {
    const int counted = critical::argument_principle_count(b, radius, contour_nodes);
    const auto inside = static_cast<int>(
        std::count_if(cs.points.begin(), cs.points.end(), [&](Complex z) { return std::abs(z) < radius; }));
    contour.push_back({{"r", radius}, {"nodes", contour_nodes}, {"argument_principle", counted}, {"found", inside}});
    if (counted != inside) ++r.violations;
  }
  r.results["contour"] = contour;
  r.files.emplace_back("critical_points.txt", io::format_zero_set(cs.points));
  r.files.emplace_back("critical_points.json",
                       Json{{"points", points_json(cs.points)}, {"residuals", cs.residuals}}.dump(2) + "\n");
  return r;
}

Result critical_sum_cmd(Node& root, Context& ctx) {
  const BoundarySet set = parse_set(root, ctx);
  const ZeroInput in = parse_zero_input(root, ctx, set);
  const double rho = root.positive("rho");
  const bool beta_given = root.has("beta");
  const double beta = beta_given ? root.number("beta") : regions::type_beta(set, regions::default_beta_grid());
  const double eps = root.positive("eps", 0.5);
  const critical::CriticalOptions options = parse_critical_options(root);
  std::vector<std::size_t> truncations;
  if (root.has("truncations")) truncations = root.counts("truncations");
  const std::optional<double> max_growth =
      root.has("max_growth") ? std::optional<double>(root.positive("max_growth")) : std::nullopt;
  const std::uint64_t seed = in.source.sampled() ? ctx.seed(root) : 0;
  root.finish();

  const ZeroSequence zeros = load_zeros(in.source, in.region, seed);
  if (truncations.empty()) truncations.push_back(zeros.size());
  for (std::size_t i = 0; i < truncations.size(); ++i) {
    if (truncations[i] < 2 || truncations[i] > zeros.size()) {
      throw ConfigError("truncations", "each truncation must lie in [2, number of zeros]");
    }
    if (i > 0 && truncations[i] <= truncations[i - 1]) throw ConfigError("truncations", "must be increasing");
  }

  Result r;
  Json rows = Json::array();
  critical::SumSeries last;
  double previous = 0.0;
  for (std::size_t i = 0; i < truncations.size(); ++i) {
    const BlaschkeProduct b(zeros.prefix(truncations[i]));
    const critical::CriticalSet cs = critical::critical_points(b, options);
    last = critical::critical_sum(cs, set, rho, beta, eps);
    const double total = last.total();
    Json row = {{"N", truncations[i]},
                {"critical_points", cs.size()},
                {"max_residual", cs.max_residual()},
                {"weighted_sum", total},
                {"log_weighted_sum", critical::log_weighted_sum(cs, eps).total()},
                {"unweighted_sum", critical::unweighted_sum(cs).total()},
                {"zero_alpha", b.zeros().alpha()}};
    if (i > 0) {
      const double growth = previous > 0.0 ? total / previous - 1.0 : 0.0;
      row["growth"] = growth;
      if (max_growth && !(growth < *max_growth)) ++r.violations;
    }
    previous = total;
    rows.push_back(row);
  }
  r.results = {{"rho", rho},
               {"beta", beta},
               {"beta_estimated", !beta_given},
               {"eps", eps},
               {"exponent", std::max(rho - beta + eps, 0.0)},
               {"rows", rows}};
  if (max_growth) r.results["max_growth"] = *max_growth;
  r.files.emplace_back("critical-sum.csv", io::series_csv(last));
  return r;
}

Result beta_estimate(Node& root, Context& ctx) {
  const BoundarySet set = parse_set(root, ctx);
  const std::vector<double> grid = root.numbers("x_grid", regions::default_beta_grid());
  for (const double x : grid) {
    if (!(x > 0.0 && x < 1.0)) throw ConfigError("x_grid", "values must lie in (0, 1)");
  }
  root.finish();

  Result r;
  std::vector<double> measures;
  std::string csv = "x,measure\n";
  for (const double x : grid) {
    measures.push_back(regions::neighborhood_measure(set, x));
    csv += io::format_double(x) + "," + io::format_double(measures.back()) + "\n";
  }
  r.results = {{"beta", regions::type_beta(set, grid)}, {"x", grid}, {"measure", measures}};
  r.files.emplace_back("beta-estimate.csv", csv);
  return r;
}

Result means_trend(Node& root, Context& ctx) {
  Node f = root.child("family");
  const std::string kind = f.text("kind");
  means::ZeroFamily family;
  Json family_echo;
  if (kind == "radial_dyadic") {
    f.finish();
    family = means::radial_dyadic_family();
  } else if (kind == "sampled") {
    const ModelFunction phi = parse_model(f.child("model"));
    const double k = parse_k(f);
    const BoundarySet set = parse_set(f, ctx);
    const RadialLaw law = parse_law(f.child("law"));
    f.finish();
    const std::uint64_t seed = ctx.seed(root);
    const StolzSpec spec(phi, set, k);
    family = [spec, seed, law](std::size_t n) { return regions::sample_zeros(spec, n, seed, law); };
  } else {
    throw ConfigError("family.kind", "expected radial_dyadic or sampled");
  }
  const std::vector<double> p_list = root.numbers("p");
  for (const double p : p_list) {
    if (!(p > 0.0)) throw ConfigError("p", "exponents must be positive");
  }
  const std::vector<std::size_t> truncations = root.counts("N");
  for (std::size_t i = 0; i < truncations.size(); ++i) {
    if (truncations[i] < 1 || (i > 0 && truncations[i] <= truncations[i - 1])) {
      throw ConfigError("N", "must be increasing positive integers");
    }
  }
  const std::vector<double> r_grid = root.numbers("r_grid", means::default_radius_grid());
  for (const double r : r_grid) {
    if (!(r >= 0.0 && r < 1.0)) throw ConfigError("r_grid", "radii must lie in [0, 1)");
  }
  struct Expectation {
    std::vector<double> p;
    double threshold = 0.0;
    bool bounded = true;
  };
  std::vector<Expectation> expectations;
  if (root.has("expectations")) {
    Node e = root.child("expectations");
    if (e.has("bounded")) {
      Node b = e.child("bounded");
      expectations.push_back({b.numbers("p"), b.positive("max_growth"), true});
      b.finish();
    }
    if (e.has("unbounded")) {
      Node u = e.child("unbounded");
      expectations.push_back({u.numbers("p"), u.positive("min_growth"), false});
      u.finish();
    }
    e.finish();
  }
  if (kind == "radial_dyadic" && root.has("seed")) ctx.seed(root);
  root.finish();

  const means::MeansTable table = means::hp_trend(family, p_list, truncations, r_grid);
  Result r;
  Json sup = Json::array();
  for (const std::size_t n : truncations) {
    for (const double p : p_list) sup.push_back({{"N", n}, {"p", p}, {"sup_over_r", table.sup_over_r(n, p)}});
  }
  Json growth = Json::array();
  for (std::size_t i = 1; i < truncations.size(); ++i) {
    for (const double p : p_list) {
      const double g = table.growth(p, truncations[i - 1], truncations[i]);
      Json row = {{"p", p}, {"from", truncations[i - 1]}, {"to", truncations[i]}, {"growth", g}};
      for (const Expectation& e : expectations) {
        if (std::find(e.p.begin(), e.p.end(), p) == e.p.end()) continue;
        const bool ok = e.bounded ? g < e.threshold : g > e.threshold;
        row[e.bounded ? "max_growth" : "min_growth"] = e.threshold;
        row["expectation_met"] = ok;
        if (!ok) ++r.violations;
      }
      growth.push_back(row);
    }
  }
  r.results = {{"rows", io::to_json(table)}, {"sup", sup}, {"growth", growth}};
  r.files.emplace_back("means-trend.csv", io::means_csv(table));
  return r;
}

std::vector<double> dyadic_radii(std::size_t levels, double step, double shift) {
  std::vector<double> radii;
  for (std::size_t j = 1; j <= levels; ++j) radii.push_back(1.0 - std::exp2(-(static_cast<double>(j) * step + shift)));
  return radii;
}

Result envelope_fit_cmd(Node& root, Context& ctx) {
  const BoundarySet set = parse_set(root, ctx);
  const ZeroInput in = parse_zero_input(root, ctx, set);
  double rho = 0.0;
  if (root.has("rho")) {
    rho = root.positive("rho");
  } else if (in.region && in.region->phi.kind() == ModelFunction::Kind::ExpTangential) {
    rho = in.region->phi.parameter();
  } else {
    throw ConfigError("rho", "is required unless zeros are sampled in an exp_tangential region");
  }
  std::size_t levels = 30;
  std::size_t angular = 4096;
  if (root.has("grid")) {
    Node g = root.child("grid");
    levels = g.count("levels", levels);
    angular = g.count("angular", angular);
    g.finish();
  }
  if (levels < 1 || angular < 8) throw ConfigError("grid", "need levels >= 1 and angular >= 8");
  double max_c2_change = 0.2;
  double max_violation = 1.1;
  if (root.has("thresholds")) {
    Node t = root.child("thresholds");
    max_c2_change = t.positive("max_c2_change", max_c2_change);
    max_violation = t.positive("max_violation", max_violation);
    t.finish();
  }
  const std::uint64_t seed = in.source.sampled() ? ctx.seed(root) : 0;
  root.finish();

  const BlaschkeProduct b(load_zeros(in.source, in.region, seed));
  // Refinement halves the radial step in log2(1 - r) and doubles the angles;
  // the held-out grid sits between the refined nodes.
  const std::vector<double> coarse_radii = dyadic_radii(levels, 1.0, 0.0);
  const std::vector<double> fine_radii = dyadic_radii(2 * levels, 0.5, 0.0);
  const std::vector<double> held_radii = dyadic_radii(2 * levels, 0.5, 0.25);
  const double pi = 3.141592653589793;
  const std::vector<Complex> coarse = bounds::polar_grid(coarse_radii, angular);
  const std::vector<Complex> fine = bounds::polar_grid(fine_radii, 2 * angular);
  const std::vector<Complex> held = bounds::polar_grid(held_radii, 4 * angular, pi / (4.0 * angular));

  const bounds::EnvelopeFit fit_coarse = bounds::envelope_fit(b, set, rho, coarse);
  const bounds::EnvelopeFit fit_fine = bounds::envelope_fit(b, set, rho, fine);
  const double change = relative_change(fit_coarse.c2, fit_fine.c2);
  const double violation = bounds::envelope_violation(fit_fine, b, set, held);

  Result r;
  auto fit_json = [](const bounds::EnvelopeFit& f) {
    return Json{{"c1", f.c1}, {"c2", f.c2}, {"rho", f.rho}, {"grid_size", f.grid_size}};
  };
  r.results = {{"degree", b.degree()},
               {"coarse", fit_json(fit_coarse)},
               {"refined", fit_json(fit_fine)},
               {"c2_relative_change", change},
               {"max_c2_change", max_c2_change},
               {"held_out_points", held.size()},
               {"held_out_violation", violation},
               {"max_violation", max_violation}};
  if (!(change < max_c2_change)) ++r.violations;
  if (!(violation <= max_violation)) ++r.violations;
  return r;
}

Result region_boundary_cmd(Node& root, Context&) {
  const ModelFunction phi = parse_model(root.child("model"));
  const double k = parse_k(root);
  const double vertex = root.number("vertex", 0.0);
  const std::uint64_t resolution = root.count("resolution", 256);
  if (resolution < 2) throw ConfigError("resolution", "must be at least 2");
  root.finish();

  const StolzSpec spec(phi, BoundarySet::point(vertex), k);
  const std::vector<Complex> points = regions::region_boundary(spec, vertex, static_cast<int>(resolution));
  Result r;
  r.results = {{"nonempty", regions::region_nonempty(phi, k)}, {"points", points_json(points)}};
  r.files.emplace_back("region-boundary.txt", io::format_zero_set(points));
  return r;
}

struct Command {
  const char* name;
  const char* inequality;
  Result (*handler)(Node&, Context&);
};

const std::vector<Command>& commands() {
  static const std::vector<Command> table = {
      {"verify-lemma", "phi(|t - z|lambda|| / 3) / |1 - conj(lambda) z| <= 2C + K, lambda in S(t, K), |z| <= 1",
       verify_lemma},
      {"verify-theorem1", "|B'(z)| <= 2 (2C + K)^2 alpha / phi(d(z, E) / 6)^2, zeros in S(E, K)", verify_theorem1},
      {"critical-points", "B'(z) = 0, |z| < 1; n - 1 points for degree n", critical_points_cmd},
      {"critical-sum", "sum (1 - |z'_n|) d(z'_n, E)^(rho - beta + eps)_+ < inf", critical_sum_cmd},
      {"beta-estimate", "|E_x| = O(x^beta), x -> 0", beta_estimate},
      {"means-trend", "sup_r M_p(r, B') < inf", means_trend},
      {"envelope-fit", "|B'(z)| <= C1 exp(C2 / d(z, E)^rho)", envelope_fit_cmd},
      {"region-boundary", "phi(|t - lambda|) = K (1 - |lambda|)", region_boundary_cmd},
  };
  return table;
}

const Command* find_command(const std::string& name) {
  for (const Command& c : commands()) {
    if (name == c.name) return &c;
  }
  return nullptr;
}

std::string error_kind(const std::exception& e) {
  if (dynamic_cast<const critical::RootFindingError*>(&e)) return "RootFindingError";
  if (dynamic_cast<const ResolutionError*>(&e)) return "ResolutionError";
  if (dynamic_cast<const InconclusiveContourError*>(&e)) return "InconclusiveContourError";
  if (dynamic_cast<const SamplingFailure*>(&e)) return "SamplingFailure";
  if (dynamic_cast<const PreconditionError*>(&e)) return "PreconditionError";
  if (dynamic_cast<const InvalidZeroError*>(&e)) return "InvalidZeroError";
  if (dynamic_cast<const DomainError*>(&e)) return "DomainError";
  if (dynamic_cast<const ParseError*>(&e)) return "ParseError";
  return "Error";
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const Command& c : commands()) out.emplace_back(c.name);
    return out;
  }();
  return names;
}

Outcome execute(const std::string& subcommand, const io::Json& config, const std::filesystem::path& base_dir,
                std::optional<std::uint64_t> seed_override) {
  const Command* command = find_command(subcommand);
  if (!command) throw ConfigError("", "unknown subcommand '" + subcommand + "'");
  Node root(config, "");
  if (root.has("experiment") && root.text("experiment") != subcommand) {
    throw ConfigError("experiment", "does not match subcommand '" + subcommand + "'");
  }
  if (root.has("out")) root.text("out");
  if (root.has("seed")) root.count("seed");

  Context ctx{base_dir, seed_override, std::nullopt};
  Result result = command->handler(root, ctx);

  Json echo = config;
  echo.erase("out");
  if (ctx.seed_used) echo["seed"] = *ctx.seed_used;

  Outcome outcome;
  outcome.violations = result.violations;
  outcome.report = {{"canonical",
                     {{"experiment", subcommand},
                      {"config", echo},
                      {"inequality", command->inequality},
                      {"violations", result.violations},
                      {"results", std::move(result.results)}}},
                    {"meta", {{"version", kVersion}, {"timestamp", utc_timestamp()}, {"threads", worker_count()}}}};
  outcome.files = std::move(result.files);
  return outcome;
}

std::string canonical_text(const io::Json& report) { return report.at("canonical").dump(2) + "\n"; }

int run(const Invocation& invocation, std::ostream& out, std::ostream& err) {
  try {
    Json config;
    try {
      config = Json::parse(io::read_text(invocation.config));
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError("", invocation.config.string() + ": " + e.what());
    } catch (const ParseError& e) {
      throw ConfigError("", e.what());
    }
    const Outcome outcome = execute(invocation.subcommand, config, invocation.config.parent_path(), invocation.seed);

    std::filesystem::path dir = invocation.out.value_or(".");
    if (!invocation.out && config.contains("out")) dir = config.at("out").get<std::string>();
    if (!invocation.out && dir.is_relative() && config.contains("out")) dir = invocation.config.parent_path() / dir;
    std::filesystem::create_directories(dir);
    const std::filesystem::path report_path = dir / (invocation.subcommand + ".json");
    io::write_atomic(report_path, outcome.report.dump(2) + "\n");
    for (const auto& [name, contents] : outcome.files) io::write_atomic(dir / name, contents);

    out << invocation.subcommand << ": violations=" << outcome.violations << " report=" << report_path.string()
        << "\n";
    return outcome.violations == 0 ? kExitOk : kExitViolations;
  } catch (const ConfigError& e) {
    err << Json{{"error", {{"kind", "ConfigError"}, {"field", e.field()}, {"message", e.what()}}}}.dump() << "\n";
    return kExitConfig;
  } catch (const ParseError& e) {
    err << Json{{"error", {{"kind", "ParseError"}, {"message", e.what()}}}}.dump() << "\n";
    return kExitConfig;
  } catch (const critical::RootFindingError& e) {
    err << Json{{"error",
                 {{"kind", "RootFindingError"},
                  {"message", e.what()},
                  {"converged", e.converged()},
                  {"iterations", e.iterations()},
                  {"partial", critical_json(e.partial())}}}}
               .dump()
        << "\n";
    return kExitNumerical;
  } catch (const Error& e) {
    err << Json{{"error", {{"kind", error_kind(e)}, {"message", e.what()}}}}.dump() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << Json{{"error", {{"kind", "Error"}, {"message", e.what()}}}}.dump() << "\n";
    return kExitNumerical;
  }
}

}  // namespace blab::runner
