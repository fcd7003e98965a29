#pragma once

// Model functions phi, closed boundary sets E on the unit circle and the
// Stolz-type regions S(E, K) = { lambda : phi(d(lambda, E)) <= K (1 - |lambda|) }.
//
// Distances are Euclidean in the plane. For a point r e^{i theta} and a
// circle point e^{i phi} at angular separation psi,
//
//   |e^{i phi} - r e^{i theta}|^2 = (1 - r)^2 + 4 r sin^2(psi / 2),
//
// which is evaluated from the deficit 1 - r so that points near the circle
// keep full relative accuracy.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "blab/core_products.hpp"
#include "blab/rng.hpp"

namespace blab::regions {

class ModelFunction {
 public:
  enum class Kind { Linear, TruncatedPower, ExpTangential };

  static ModelFunction linear();
  /// phi(x) = x^gamma on [0, 2], 2^(gamma-1) x beyond; gamma >= 1.
  static ModelFunction truncated_power(double gamma);
  /// phi(x) = exp(-x^-rho), phi(0) = 0; rho > 0.
  static ModelFunction exp_tangential(double rho);

  [[nodiscard]] Kind kind() const { return kind_; }
  /// gamma for TruncatedPower, rho for ExpTangential, 1 for Linear.
  [[nodiscard]] double parameter() const { return parameter_; }
  /// Smallest C with phi(x) <= C x on (0, inf).
  [[nodiscard]] double c_const() const { return c_const_; }

  [[nodiscard]] double operator()(double x) const;
  /// sup { x >= 0 : phi(x) <= y }; +inf when phi never exceeds y.
  [[nodiscard]] double inverse(double y) const;

  [[nodiscard]] std::string name() const;

 private:
  ModelFunction(Kind kind, double parameter);

  Kind kind_ = Kind::Linear;
  double parameter_ = 1.0;
  double c_const_ = 1.0;
};

/// Throws DomainError for x < 0.
double model_eval(const ModelFunction& phi, double x);
double model_constant(const ModelFunction& phi);

struct Arc {
  double start = 0.0;
  double end = 0.0;  // end >= start, radians
};

struct CantorGenerator {
  Arc base;
  double ratio = 1.0 / 3.0;  // child length / parent length, in (0, 1/2)
  int depth = 0;

  /// The 2^depth closed arcs of the finite-depth generator.
  [[nodiscard]] std::vector<Arc> expand() const;
  [[nodiscard]] double finest_length() const;
};

/// Closed nonempty subset of the unit circle: arcs, isolated points and an
/// optional finite-depth Cantor generator.
class BoundarySet {
 public:
  BoundarySet(std::vector<Arc> arcs, std::vector<double> points,
              std::optional<CantorGenerator> cantor = std::nullopt);

  static BoundarySet point(double angle) { return BoundarySet({}, {angle}); }
  static BoundarySet arc(double start, double end) { return BoundarySet({{start, end}}, {}); }
  static BoundarySet full_circle() { return arc(0.0, 2.0 * 3.141592653589793); }

  [[nodiscard]] const std::vector<Arc>& arcs() const { return arcs_; }
  [[nodiscard]] const std::vector<double>& points() const { return points_; }
  [[nodiscard]] const std::optional<CantorGenerator>& cantor() const { return cantor_; }

  /// Disjoint closed intervals covering E, sorted, inside [0, 2 pi].
  [[nodiscard]] const std::vector<Arc>& components() const { return components_; }
  [[nodiscard]] bool is_full_circle() const { return full_; }

  /// Smallest angular separation in [0, pi] between `angle` and E.
  [[nodiscard]] double angular_gap(double angle) const;
  /// Angle of a point of E closest to `angle`.
  [[nodiscard]] double nearest_angle(double angle) const;

  /// Euclidean distance from the point with 1 - |z| = deficit, arg z = angle.
  [[nodiscard]] double distance_polar(double deficit, double angle) const;
  [[nodiscard]] double distance(Complex z) const;

  /// Normalised arclength of { t : d(t, E) < x }.
  [[nodiscard]] double neighborhood_measure(double x) const;

  /// Uniform component, then uniform point inside it.
  [[nodiscard]] double sample_angle(Stream& rng) const;

  /// True when every point of `this` lies in `other` (component-wise check).
  [[nodiscard]] bool subset_of(const BoundarySet& other) const;

 private:
  std::vector<Arc> arcs_;
  std::vector<double> points_;
  std::optional<CantorGenerator> cantor_;
  std::vector<Arc> components_;
  bool full_ = false;
};

double distance(DiskPoint z, const BoundarySet& set);
double distance(const Zero& z, const BoundarySet& set);

struct StolzSpec {
  ModelFunction phi;
  BoundarySet set;
  double k_const = 1.0;

  StolzSpec(ModelFunction phi, BoundarySet set, double k_const);
};

/// Relative slack applied to K (1 - |lambda|) in membership tests.
inline constexpr double kMembershipSlack = 1e-12;

/// phi(d(lambda, E)) <= K (1 - |lambda|). Throws DomainError for |lambda| >= 1.
bool in_stolz(DiskPoint lambda, const StolzSpec& spec);
bool in_stolz(const Zero& lambda, const StolzSpec& spec);

/// Largest angular offset psi such that (1-deficit) e^{i(theta_t + psi)} lies
/// within chordal distance `chord` of e^{i theta_t}; nullopt when even the
/// radial point is farther than `chord`.
std::optional<double> angular_window(double deficit, double chord);

/// Admissible angular half-width around a vertex for a point at this deficit,
/// i.e. window for chord = phi^{-1}(K deficit).
std::optional<double> stolz_window(const ModelFunction& phi, double k_const, double deficit);

/// True when S(t, K) contains at least one point: some deficit in (0, 1]
/// satisfies phi(deficit) <= K deficit (the radial point minimises |t - lambda|).
bool region_nonempty(const ModelFunction& phi, double k_const);

/// Points on the boundary of S(t, K) along `resolution` rays from the vertex
/// e^{i vertex_angle} into the disk.
std::vector<DiskPoint> region_boundary(const StolzSpec& spec, double vertex_angle, int resolution);

struct RadialLaw {
  enum class Kind { Geometric, Power };
  Kind kind = Kind::Geometric;
  double parameter = 0.5;

  static RadialLaw geometric(double q) { return {Kind::Geometric, q}; }
  static RadialLaw power(double s) { return {Kind::Power, s}; }

  /// 1 - |z_k| for k = 1, 2, ...
  [[nodiscard]] double deficit(std::size_t k) const;
  void validate() const;
};

/// n zeros in S(E, K) with radii from the law and angles near points of E.
ZeroSequence sample_zeros(const StolzSpec& spec, std::size_t n, std::uint64_t seed, const RadialLaw& law);

double neighborhood_measure(const BoundarySet& set, double x);

/// x = 2^-k, k = 4..14.
std::vector<double> default_beta_grid();

/// Least-squares slope of log |E_x| against log x; heuristic estimate of the type beta(E).
double type_beta(const BoundarySet& set, const std::vector<double>& x_grid);

}  // namespace blab::regions
