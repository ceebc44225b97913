#pragma once

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "padelab/compact_set.hpp"
#include "padelab/polynomial.hpp"

namespace padelab {

// Row n: center + radius * exp(i (2 pi k / n + rotation)), k = 0..n-1.
struct RootsOfUnityTable {
  Complex center = 0.0;
  Real radius = 1.0;
  Real rotation = 0.0;
};

// Every node at one point; the classical Pade case when point = 0.
struct ConfluentTable {
  Complex point = 0.0;
};

// Row n: n equally spaced angles covering [theta0, theta1] (endpoints
// included; the midpoint when n = 1).
struct ArcTable {
  Complex center = 0.0;
  Real radius = 1.0;
  Real theta0 = 0.0;
  Real theta1 = kPi;
};

struct ExplicitTable {
  std::vector<std::vector<Complex>> rows;  // rows[n - 1] has n points
};

// Where the nodes of a table sit relative to the compact set E.
enum class SupportClass { boundary, interior, outside };
const char* to_string(SupportClass s);

/**
 * A triangular interpolation scheme: row n holds n nodes.
 *
 * Catalog kinds are generated on demand; explicit tables carry their rows.
 */
class TriangularTable {
 public:
  using Kind = std::variant<RootsOfUnityTable, ConfluentTable, ArcTable, ExplicitTable>;

  TriangularTable(Kind kind, int max_row);

  const Kind& kind() const { return kind_; }
  const char* kind_name() const;
  int max_row() const { return max_row_; }

  // Throws ConfigError when n is outside [1, max_row].
  std::vector<Complex> row(int n) const;
  // prod_k (z - beta_{n,k})
  Polynomial omega(int n) const;

  // Classify rows 1..up_to against E (boundary within 1e-9).
  SupportClass support_class(const CompactSet& E, int up_to) const;

 private:
  Kind kind_;
  int max_row_;
};

inline std::vector<Complex> table_row(const TriangularTable& t, int n) { return t.row(n); }
inline Polynomial omega_poly(const TriangularTable& t, int n) { return t.omega(n); }

// CSV with header "row,k,re,im"; row and k are 1-based.
TriangularTable load_explicit_table(const std::filesystem::path& csv_path);
TriangularTable parse_explicit_table(const std::string& csv_text);

/// Normalized counting measure of a finite point set (equal weights).
class CountingMeasure {
 public:
  CountingMeasure() = default;
  explicit CountingMeasure(std::vector<Complex> points) : points_(std::move(points)) {}
  static CountingMeasure of_roots(const RootSet& roots) { return CountingMeasure(roots.expanded()); }

  std::span<const Complex> points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  Real weight() const { return points_.empty() ? 0.0 : 1.0 / static_cast<Real>(points_.size()); }

 private:
  std::vector<Complex> points_;
};

// Closed disk |z - center| <= radius.
struct DiskRegion {
  Complex center;
  Real radius;
};
// Closed annulus inner <= |z - center| <= outer.
struct AnnulusRegion {
  Complex center;
  Real inner;
  Real outer;
};
using MassRegion = std::variant<DiskRegion, AnnulusRegion>;

// Fraction of points in the closed region (boundary tolerance 1e-12).
Real counting_measure_mass(const CountingMeasure& m, const MassRegion& region);

}  // namespace padelab
