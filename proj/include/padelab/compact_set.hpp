#pragma once

#include <variant>
#include <vector>

#include "padelab/scalar.hpp"

namespace padelab {

struct Box {
  Real xmin, xmax, ymin, ymax;
};

// Sampling resolution for sup norms and extremal values over a set.
struct GridSpec {
  int interior = 400;  // cells per side of the bounding-box grid
  int boundary = 2048;  // points on the boundary curve
};

struct DiskSet {
  Complex center;
  Real radius;
};
struct CircleSet {
  Complex center;
  Real radius;
};
// Closed segment [a, b].
struct IntervalSet {
  Complex a;
  Complex b;
};
// Closed simple polygon given by its vertices in order.
struct PolygonSet {
  std::vector<Complex> vertices;
};

/// A compact subset of the plane: closed disk, circle, segment or polygon.
class CompactSet {
 public:
  using Shape = std::variant<DiskSet, CircleSet, IntervalSet, PolygonSet>;

  explicit CompactSet(Shape shape);
  static CompactSet disk(Complex c, Real r) { return CompactSet(DiskSet{c, r}); }
  static CompactSet circle(Complex c, Real r) { return CompactSet(CircleSet{c, r}); }
  static CompactSet interval(Complex a, Complex b) { return CompactSet(IntervalSet{a, b}); }
  static CompactSet polygon(std::vector<Complex> v) { return CompactSet(PolygonSet{std::move(v)}); }

  const Shape& shape() const { return shape_; }
  const char* kind() const;

  bool contains(Complex z, Real tol = 1e-12) const;
  Real distance_to_boundary(Complex z) const;
  bool on_boundary(Complex z, Real tol = 1e-9) const { return distance_to_boundary(z) <= tol; }

  Box bounding_box() const;
  // max |z - about| over the set.
  Real outer_radius(Complex about = 0.0) const;

  // count points evenly spaced along the boundary curve.
  std::vector<Complex> boundary_samples(int count) const;
  // Boundary samples plus the grid points of the bounding box lying in the set.
  std::vector<Complex> samples(const GridSpec& grid) const;

 private:
  Shape shape_;
};

}  // namespace padelab
