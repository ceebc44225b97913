#include "padelab/compact_set.hpp"

#include <algorithm>
#include <cmath>

#include "padelab/detail/overloaded.hpp"
#include "padelab/errors.hpp"

namespace padelab {

namespace {

using detail::overloaded;

Real segment_distance(Complex z, Complex a, Complex b) {
  const Complex ab = b - a;
  const Real len2 = std::norm(ab);
  if (len2 == 0.0) return std::abs(z - a);
  Real t = ((z - a) * std::conj(ab)).real() / len2;
  t = std::clamp(t, 0.0, 1.0);
  return std::abs(z - (a + t * ab));
}

bool point_in_polygon(Complex z, const std::vector<Complex>& v) {
  bool inside = false;
  for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
    const Real yi = v[i].imag(), yj = v[j].imag();
    if ((yi > z.imag()) != (yj > z.imag())) {
      const Real x = v[j].real() + (z.imag() - yj) * (v[i].real() - v[j].real()) / (yi - yj);
      if (z.real() < x) inside = !inside;
    }
  }
  return inside;
}

}  // namespace

CompactSet::CompactSet(Shape shape) : shape_(std::move(shape)) {
  std::visit(overloaded{
                 [](const DiskSet& d) {
                   if (!(d.radius > 0.0)) throw ConfigError("disk radius must be positive");
                 },
                 [](const CircleSet& c) {
                   if (!(c.radius > 0.0)) throw ConfigError("circle radius must be positive");
                 },
                 [](const IntervalSet& s) {
                   if (s.a == s.b) throw ConfigError("interval endpoints coincide");
                 },
                 [](const PolygonSet& p) {
                   if (p.vertices.size() < 3) throw ConfigError("polygon needs at least 3 vertices");
                 },
             },
             shape_);
}

const char* CompactSet::kind() const {
  return std::visit(overloaded{
                        [](const DiskSet&) { return "disk"; },
                        [](const CircleSet&) { return "circle"; },
                        [](const IntervalSet&) { return "interval"; },
                        [](const PolygonSet&) { return "polygon"; },
                    },
                    shape_);
}

Real CompactSet::distance_to_boundary(Complex z) const {
  return std::visit(overloaded{
                        [&](const DiskSet& d) { return std::abs(std::abs(z - d.center) - d.radius); },
                        [&](const CircleSet& c) { return std::abs(std::abs(z - c.center) - c.radius); },
                        [&](const IntervalSet& s) { return segment_distance(z, s.a, s.b); },
                        [&](const PolygonSet& p) {
                          Real d = kInfinity;
                          const auto& v = p.vertices;
                          for (std::size_t i = 0; i < v.size(); ++i)
                            d = std::min(d, segment_distance(z, v[i], v[(i + 1) % v.size()]));
                          return d;
                        },
                    },
                    shape_);
}

bool CompactSet::contains(Complex z, Real tol) const {
  return std::visit(overloaded{
                        [&](const DiskSet& d) { return std::abs(z - d.center) <= d.radius + tol; },
                        [&](const CircleSet&) { return distance_to_boundary(z) <= tol; },
                        [&](const IntervalSet&) { return distance_to_boundary(z) <= tol; },
                        [&](const PolygonSet& p) {
                          return point_in_polygon(z, p.vertices) || distance_to_boundary(z) <= tol;
                        },
                    },
                    shape_);
}

Box CompactSet::bounding_box() const {
  return std::visit(overloaded{
                        [](const DiskSet& d) {
                          return Box{d.center.real() - d.radius, d.center.real() + d.radius,
                                     d.center.imag() - d.radius, d.center.imag() + d.radius};
                        },
                        [](const CircleSet& c) {
                          return Box{c.center.real() - c.radius, c.center.real() + c.radius,
                                     c.center.imag() - c.radius, c.center.imag() + c.radius};
                        },
                        [](const IntervalSet& s) {
                          return Box{std::min(s.a.real(), s.b.real()), std::max(s.a.real(), s.b.real()),
                                     std::min(s.a.imag(), s.b.imag()), std::max(s.a.imag(), s.b.imag())};
                        },
                        [](const PolygonSet& p) {
                          Box b{kInfinity, -kInfinity, kInfinity, -kInfinity};
                          for (const auto& v : p.vertices) {
                            b.xmin = std::min(b.xmin, v.real());
                            b.xmax = std::max(b.xmax, v.real());
                            b.ymin = std::min(b.ymin, v.imag());
                            b.ymax = std::max(b.ymax, v.imag());
                          }
                          return b;
                        },
                    },
                    shape_);
}

Real CompactSet::outer_radius(Complex about) const {
  return std::visit(overloaded{
                        [&](const DiskSet& d) { return std::abs(d.center - about) + d.radius; },
                        [&](const CircleSet& c) { return std::abs(c.center - about) + c.radius; },
                        [&](const IntervalSet& s) {
                          return std::max(std::abs(s.a - about), std::abs(s.b - about));
                        },
                        [&](const PolygonSet& p) {
                          Real r = 0.0;
                          for (const auto& v : p.vertices) r = std::max(r, std::abs(v - about));
                          return r;
                        },
                    },
                    shape_);
}

std::vector<Complex> CompactSet::boundary_samples(int count) const {
  std::vector<Complex> out;
  out.reserve(static_cast<std::size_t>(count));
  auto on_circle = [&](Complex c, Real r) {
    for (int k = 0; k < count; ++k)
      out.push_back(c + std::polar(r, 2.0 * kPi * k / count));
  };
  std::visit(overloaded{
                 [&](const DiskSet& d) { on_circle(d.center, d.radius); },
                 [&](const CircleSet& c) { on_circle(c.center, c.radius); },
                 [&](const IntervalSet& s) {
                   for (int k = 0; k < count; ++k)
                     out.push_back(s.a + (s.b - s.a) * (count == 1 ? 0.5 : Real(k) / (count - 1)));
                 },
                 [&](const PolygonSet& p) {
                   const auto& v = p.vertices;
                   Real perimeter = 0.0;
                   for (std::size_t i = 0; i < v.size(); ++i) perimeter += std::abs(v[(i + 1) % v.size()] - v[i]);
                   for (int k = 0; k < count; ++k) {
                     Real t = perimeter * k / count;
                     for (std::size_t i = 0; i < v.size(); ++i) {
                       const Complex a = v[i], b = v[(i + 1) % v.size()];
                       const Real len = std::abs(b - a);
                       if (t <= len || i + 1 == v.size()) {
                         out.push_back(a + (b - a) * (len > 0.0 ? std::min(t / len, 1.0) : 0.0));
                         break;
                       }
                       t -= len;
                     }
                   }
                 },
             },
             shape_);
  return out;
}

std::vector<Complex> CompactSet::samples(const GridSpec& grid) const {
  std::vector<Complex> out = boundary_samples(grid.boundary);
  const bool has_interior =
      std::holds_alternative<DiskSet>(shape_) || std::holds_alternative<PolygonSet>(shape_);
  if (!has_interior || grid.interior <= 0) return out;
  const Box b = bounding_box();
  const int n = grid.interior;
  for (int j = 0; j <= n; ++j) {
    const Real y = b.ymin + (b.ymax - b.ymin) * j / n;
    for (int i = 0; i <= n; ++i) {
      const Complex z(b.xmin + (b.xmax - b.xmin) * i / n, y);
      if (contains(z, 0.0)) out.push_back(z);
    }
  }
  return out;
}

}  // namespace padelab
