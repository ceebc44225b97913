#include "padelab/potential.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <ostream>

#include "padelab/detail/overloaded.hpp"
#include "padelab/errors.hpp"
#include "padelab/format.hpp"

namespace padelab {

using detail::overloaded;

Measure::Measure(Kind kind) : kind_(std::move(kind)) {
  std::visit(overloaded{
                 [](const CountingMeasure& d) {
                   if (d.empty()) throw ConfigError("discrete measure needs at least one atom");
                 },
                 [](const UniformCircleMeasure& c) {
                   if (!(c.radius > 0.0)) throw ConfigError("uniform_circle radius must be positive");
                 },
                 [](const ArcsineMeasure& s) {
                   if (!(s.a < s.b)) throw ConfigError("arcsine measure needs a < b");
                 },
             },
             kind_);
}

const char* Measure::kind_name() const {
  return std::visit(overloaded{
                        [](const CountingMeasure&) { return "discrete"; },
                        [](const UniformCircleMeasure&) { return "uniform_circle"; },
                        [](const ArcsineMeasure&) { return "arcsine"; },
                    },
                    kind_);
}

Real Measure::potential(Complex z) const {
  return std::visit(overloaded{
                        [&](const CountingMeasure& d) {
                          Real acc = 0.0;
                          for (const auto& t : d.points()) acc -= std::log(std::abs(z - t));
                          return acc * d.weight();
                        },
                        [&](const UniformCircleMeasure& c) {
                          return -std::log(std::max(std::abs(z - c.center), c.radius));
                        },
                        [&](const ArcsineMeasure& s) {
                          const Complex w = (2.0 * z - (s.a + s.b)) / (s.b - s.a);
                          const Complex root = std::sqrt(w - 1.0) * std::sqrt(w + 1.0);
                          Complex t = w + root;
                          if (std::abs(t) < 1.0) t = w - root;
                          return std::log(4.0 / (s.b - s.a)) - std::log(std::max(std::abs(t), 1.0));
                        },
                    },
                    kind_);
}

Real Measure::exp_neg_potential(Complex z) const {
  const Real u = potential(z);
  return std::isinf(u) && u > 0 ? 0.0 : std::exp(-u);
}

Real Measure::support_radius() const {
  return std::visit(overloaded{
                        [](const CountingMeasure& d) {
                          Real r = 0.0;
                          for (const auto& t : d.points()) r = std::max(r, std::abs(t));
                          return r;
                        },
                        [](const UniformCircleMeasure& c) { return std::abs(c.center) + c.radius; },
                        [](const ArcsineMeasure& s) { return std::max(std::abs(s.a), std::abs(s.b)); },
                    },
                    kind_);
}

RhoExtrema rho_extrema(const CompactSet& E, const Measure& mu, const GridSpec& grid,
                       kernels::Exec exec) {
  constexpr Real match = 1e-12;
  if (const auto* c = std::get_if<UniformCircleMeasure>(&mu.kind())) {
    auto same_circle = [&](Complex center, Real r) {
      return std::abs(center - c->center) <= match && std::abs(r - c->radius) <= match;
    };
    if (const auto* d = std::get_if<DiskSet>(&E.shape()); d && same_circle(d->center, d->radius))
      return {c->radius, c->radius, true, 0};
    if (const auto* d = std::get_if<CircleSet>(&E.shape()); d && same_circle(d->center, d->radius))
      return {c->radius, c->radius, true, 0};
  }
  if (const auto* s = std::get_if<ArcsineMeasure>(&mu.kind())) {
    if (const auto* iv = std::get_if<IntervalSet>(&E.shape())) {
      const Real lo = std::min(iv->a.real(), iv->b.real()), hi = std::max(iv->a.real(), iv->b.real());
      if (iv->a.imag() == 0.0 && iv->b.imag() == 0.0 && std::abs(lo - s->a) <= match &&
          std::abs(hi - s->b) <= match) {
        const Real cap = (s->b - s->a) / 4.0;
        return {cap, cap, true, 0};
      }
    }
  }

  const auto pts = E.samples(grid);
  if (pts.empty()) throw ConfigError("rho_extrema: E has no sample points");
  const auto vals = kernels::map_points<Real>(
      pts, [&](Complex z) { return mu.exp_neg_potential(z); }, exec);
  RhoExtrema out{kInfinity, 0.0, false, 0};
  for (const Real v : vals) {
    if (v == 0.0) {
      ++out.excluded_atoms;
      continue;
    }
    out.rho_min = std::min(out.rho_min, v);
    out.rho_max = std::max(out.rho_max, v);
  }
  if (out.excluded_atoms == static_cast<int>(vals.size()))
    throw NumericalError("rho_extrema: every sample of E is an atom of the measure");
  return out;
}

int MeromorphyReport::inside_order() const {
  int total = 0;
  for (const auto& p : poles_inside) total += p.order;
  return total;
}

namespace {
constexpr Real kAtomTol = 1e-10;
}  // namespace

MeromorphyReport radius_of_meromorphy(const TargetFunction& f, const Measure& mu, int m,
                                      const CompactSet* E) {
  if (m < 0) throw ConfigError("radius_of_meromorphy: m must be non-negative");
  struct Level {
    Real level;
    Pole pole;
  };
  std::vector<Level> levels;
  for (const auto& p : f.poles()) {
    if (E && E->contains(p.location, 1e-12))
      throw ConfigError("target function has a pole on E");
    // Poles come from a root finder, so atoms are matched with a tolerance.
    if (const auto* c = std::get_if<CountingMeasure>(&mu.kind()))
      for (const auto& t : c->points())
        if (std::abs(t - p.location) <= kAtomTol * std::max(1.0, std::abs(t)))
          throw NumericalError("potential undefined at pole");
    const Real u = mu.potential(p.location);
    if (std::isinf(u)) throw NumericalError("potential undefined at pole");
    for (int k = 0; k < p.order; ++k) levels.push_back({std::exp(-u), p});
  }
  std::stable_sort(levels.begin(), levels.end(), [](const Level& a, const Level& b) {
    if (a.level != b.level) return a.level < b.level;
    return lex_less(a.pole.location, b.pole.location);
  });

  MeromorphyReport out;
  for (const auto& l : levels) out.pole_levels.push_back(l.level);
  if (static_cast<int>(levels.size()) > m) out.radius = levels[static_cast<std::size_t>(m)].level;

  std::vector<Complex> inside;
  for (const auto& p : f.poles()) {
    if (mu.exp_neg_potential(p.location) < out.radius) {
      out.poles_inside.push_back(p);
      for (int k = 0; k < p.order; ++k) inside.push_back(p.location);
    }
  }
  out.pole_polynomial = poly_from_roots(std::span<const Complex>(inside), 1.0);
  return out;
}

Discrepancy potential_discrepancy(const Measure& mu1, const Measure& mu2,
                                  std::span<const Complex> test_points, const CompactSet* E) {
  Discrepancy out;
  for (const auto& z : test_points) {
    if (E && E->contains(z, 0.0)) throw ConfigError("potential_discrepancy: test point lies in E");
    const Real u1 = mu1.potential(z), u2 = mu2.potential(z);
    if (std::isinf(u1) || std::isinf(u2)) {
      ++out.skipped;
      continue;
    }
    out.value = std::max(out.value, std::abs(u1 - u2));
  }
  return out;
}

Complex LevelGrid::point(int i, int j) const {
  return {box.xmin + (box.xmax - box.xmin) * i / nx, box.ymin + (box.ymax - box.ymin) * j / ny};
}

Box default_box(Real outer_radius) {
  const Real h = 1.5 * outer_radius;
  return {-h, h, -h, h};
}

Box level_region_box(const LevelRegion& D) {
  if (D.unbounded()) throw ConfigError("level_region_box: region is the whole plane");
  const Real h = 1.1 * (D.level() + D.measure().support_radius());
  return {-h, h, -h, h};
}

LevelGrid level_grid(const LevelRegion& D, const Box& box, int nx, int ny, kernels::Exec exec) {
  LevelGrid g;
  g.box = box;
  g.nx = nx;
  g.ny = ny;
  g.level = D.level();
  g.values = kernels::grid_values(box, nx, ny, [&](Complex z) { return D.measure().exp_neg_potential(z); }, exec);
  return g;
}

int count_components(const LevelGrid& grid) {
  const int cols = grid.nx + 1, rows = grid.ny + 1;
  std::vector<char> seen(static_cast<std::size_t>(cols) * rows, 0);
  int components = 0;
  std::deque<std::pair<int, int>> queue;
  for (int j = 0; j < rows; ++j)
    for (int i = 0; i < cols; ++i) {
      const auto idx = static_cast<std::size_t>(j) * cols + i;
      if (seen[idx] || !grid.inside(i, j)) continue;
      ++components;
      seen[idx] = 1;
      queue.emplace_back(i, j);
      while (!queue.empty()) {
        const auto [a, b] = queue.front();
        queue.pop_front();
        const int di[] = {1, -1, 0, 0}, dj[] = {0, 0, 1, -1};
        for (int k = 0; k < 4; ++k) {
          const int x = a + di[k], y = b + dj[k];
          if (x < 0 || y < 0 || x >= cols || y >= rows) continue;
          const auto nidx = static_cast<std::size_t>(y) * cols + x;
          if (seen[nidx] || !grid.inside(x, y)) continue;
          seen[nidx] = 1;
          queue.emplace_back(x, y);
        }
      }
    }
  return components;
}

std::vector<Complex> trace_level_boundary(const LevelRegion& D, const LevelGrid& grid, int samples) {
  if (D.unbounded() || samples <= 0) return {};
  const Real level = D.level();
  auto refine = [&](Complex a, Complex b) {
    // a inside, b outside
    for (int it = 0; it < 50; ++it) {
      const Complex mid = 0.5 * (a + b);
      if (D.measure().exp_neg_potential(mid) < level)
        a = mid;
      else
        b = mid;
    }
    return 0.5 * (a + b);
  };

  std::vector<Complex> crossings;
  for (int j = 0; j <= grid.ny; ++j)
    for (int i = 0; i <= grid.nx; ++i) {
      const bool in = grid.inside(i, j);
      if (i < grid.nx && in != grid.inside(i + 1, j))
        crossings.push_back(in ? refine(grid.point(i, j), grid.point(i + 1, j))
                               : refine(grid.point(i + 1, j), grid.point(i, j)));
      if (j < grid.ny && in != grid.inside(i, j + 1))
        crossings.push_back(in ? refine(grid.point(i, j), grid.point(i, j + 1))
                               : refine(grid.point(i, j + 1), grid.point(i, j)));
    }
  if (crossings.empty()) return {};

  Complex centroid = 0.0;
  for (const auto& z : crossings) centroid += z;
  centroid /= static_cast<Real>(crossings.size());
  std::sort(crossings.begin(), crossings.end(), [&](const Complex& a, const Complex& b) {
    const Real ta = std::arg(a - centroid), tb = std::arg(b - centroid);
    if (ta != tb) return ta < tb;
    return std::abs(a - centroid) < std::abs(b - centroid);
  });
  if (static_cast<int>(crossings.size()) <= samples) return crossings;
  std::vector<Complex> out;
  out.reserve(static_cast<std::size_t>(samples));
  for (int k = 0; k < samples; ++k)
    out.push_back(crossings[static_cast<std::size_t>(k) * crossings.size() / static_cast<std::size_t>(samples)]);
  return out;
}

void write_level_grid_csv(std::ostream& out, const LevelGrid& grid) {
  out << "x,y,e_minus_U,inside_flag\n";
  for (int j = 0; j <= grid.ny; ++j)
    for (int i = 0; i <= grid.nx; ++i) {
      const Complex z = grid.point(i, j);
      out << format_real(z.real()) << ',' << format_real(z.imag()) << ',' << format_real(grid.at(i, j))
          << ',' << (grid.inside(i, j) ? 1 : 0) << '\n';
    }
}

}  // namespace padelab
