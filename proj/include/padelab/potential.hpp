#pragma once

#include <iosfwd>
#include <variant>
#include <vector>

#include "padelab/compact_set.hpp"
#include "padelab/function_model.hpp"
#include "padelab/kernels.hpp"
#include "padelab/tables.hpp"

namespace padelab {

struct UniformCircleMeasure {
  Complex center;
  Real radius;
};

// Equilibrium (arcsine) measure of the real segment [a, b].
struct ArcsineMeasure {
  Real a;
  Real b;
};

/// Unit measure: discrete (equal weights), uniform on a circle, or arcsine.
class Measure {
 public:
  using Kind = std::variant<CountingMeasure, UniformCircleMeasure, ArcsineMeasure>;

  explicit Measure(Kind kind);
  static Measure discrete(std::vector<Complex> points) { return Measure(CountingMeasure(std::move(points))); }
  static Measure uniform_circle(Complex c, Real r) { return Measure(UniformCircleMeasure{c, r}); }
  static Measure arcsine(Real a, Real b) { return Measure(ArcsineMeasure{a, b}); }

  const Kind& kind() const { return kind_; }
  const char* kind_name() const;

  // U(z) = integral of log(1/|z - t|); +infinity at an atom.
  Real potential(Complex z) const;
  // exp(-U(z)); 0 at an atom.
  Real exp_neg_potential(Complex z) const;
  // max |t| over the support.
  Real support_radius() const;

 private:
  Kind kind_;
};

inline Real potential_value(const Measure& mu, Complex z) { return mu.potential(z); }

/**
 * The open sublevel set {z : exp(-U(z)) < level}.
 *
 * Membership is the strict inequality; classify() additionally treats
 * points within boundary_tol of the level as inside, which is the rule the
 * denominator normalization uses. level may be +infinity (the whole plane).
 */
class LevelRegion {
 public:
  static constexpr Real kBoundaryTol = 1e-9;

  LevelRegion(Measure mu, Real level) : mu_(std::move(mu)), level_(level) {}

  const Measure& measure() const { return mu_; }
  Real level() const { return level_; }
  bool unbounded() const { return std::isinf(level_); }

  bool contains(Complex z) const { return mu_.exp_neg_potential(z) < level_; }
  bool contains_or_on_boundary(Complex z) const {
    return unbounded() || mu_.exp_neg_potential(z) <= level_ + kBoundaryTol * std::max(1.0, level_);
  }

 private:
  Measure mu_;
  Real level_;
};

struct RhoExtrema {
  Real rho_min;
  Real rho_max;
  bool closed_form = false;
  int excluded_atoms = 0;  // grid points sitting on atoms (infinite potential)
};

// inf / max of exp(-U) over E; exact constants for matching catalog pairs.
RhoExtrema rho_extrema(const CompactSet& E, const Measure& mu, const GridSpec& grid = {},
                       kernels::Exec exec = kernels::Exec::parallel);

struct MeromorphyReport {
  Real radius = kInfinity;  // R_m, +infinity when f has at most m poles
  PoleList poles_inside;
  Polynomial pole_polynomial;  // monic, roots = poles_inside
  std::vector<Real> pole_levels;  // exp(-U) at each pole, ascending, with multiplicity

  int inside_order() const;
};

/**
 * Level R_m at which the (m+1)-th pole of f (with multiplicity) enters the
 * sublevel sets of exp(-U), together with the poles strictly below it.
 *
 * Throws NumericalError when a pole sits on an atom of a discrete measure and
 * ConfigError when a pole lies on E.
 */
MeromorphyReport radius_of_meromorphy(const TargetFunction& f, const Measure& mu, int m,
                                      const CompactSet* E = nullptr);

struct Discrepancy {
  Real value = 0.0;
  int skipped = 0;  // test points on an atom of either measure
};

// max |U1 - U2| over test points; points inside E (when given) are rejected.
Discrepancy potential_discrepancy(const Measure& mu1, const Measure& mu2,
                                  std::span<const Complex> test_points, const CompactSet* E = nullptr);

/// exp(-U) sampled on a lattice together with membership in a level region.
struct LevelGrid {
  Box box;
  int nx = 0;
  int ny = 0;
  Real level = kInfinity;
  std::vector<Real> values;  // row-major, (nx+1) x (ny+1)

  Complex point(int i, int j) const;
  Real at(int i, int j) const { return values[static_cast<std::size_t>(j) * (nx + 1) + i]; }
  bool inside(int i, int j) const { return at(i, j) < level; }
};

// Square box centered on the origin with half-width 1.5 * outer_radius.
Box default_box(Real outer_radius);
// Square box containing the closure of a bounded level region: exp(-U(z)) >= |z| - s
// with s the support radius, so the region lies in |z| < level + s.
Box level_region_box(const LevelRegion& D);

LevelGrid level_grid(const LevelRegion& D, const Box& box, int nx, int ny,
                     kernels::Exec exec = kernels::Exec::parallel);

// 4-connected components of the inside cells.
int count_components(const LevelGrid& grid);

/**
 * Points on the level curve exp(-U) = level.
 *
 * Sign changes along lattice edges are refined by bisection on the exact
 * potential; the crossings are ordered by angle about their centroid and
 * `samples` of them are taken at evenly spaced indices.
 */
std::vector<Complex> trace_level_boundary(const LevelRegion& D, const LevelGrid& grid, int samples);

// CSV: x,y,e_minus_U,inside_flag
void write_level_grid_csv(std::ostream& out, const LevelGrid& grid);

}  // namespace padelab
