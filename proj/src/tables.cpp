#include "padelab/tables.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "padelab/detail/overloaded.hpp"
#include "padelab/errors.hpp"

namespace padelab {

using detail::overloaded;

const char* to_string(SupportClass s) {
  switch (s) {
    case SupportClass::boundary: return "boundary";
    case SupportClass::interior: return "interior";
    case SupportClass::outside: return "outside";
  }
  return "unknown";
}

TriangularTable::TriangularTable(Kind kind, int max_row) : kind_(std::move(kind)), max_row_(max_row) {
  if (max_row_ < 1) throw ConfigError("table max_row must be at least 1");
  std::visit(overloaded{
                 [](const RootsOfUnityTable& t) {
                   if (!(t.radius > 0.0)) throw ConfigError("roots_of_unity radius must be positive");
                 },
                 [](const ConfluentTable&) {},
                 [](const ArcTable& t) {
                   if (!(t.radius > 0.0)) throw ConfigError("arc radius must be positive");
                   if (!(t.theta0 < t.theta1)) throw ConfigError("arc needs theta0 < theta1");
                 },
                 [this](const ExplicitTable& t) {
                   if (static_cast<int>(t.rows.size()) < max_row_)
                     max_row_ = static_cast<int>(t.rows.size());
                   for (std::size_t n = 0; n < t.rows.size(); ++n)
                     if (t.rows[n].size() != n + 1)
                       throw ConfigError("explicit table row " + std::to_string(n + 1) + " has " +
                                         std::to_string(t.rows[n].size()) + " points");
                   if (max_row_ < 1) throw ConfigError("explicit table has no rows");
                 },
             },
             kind_);
}

const char* TriangularTable::kind_name() const {
  return std::visit(overloaded{
                        [](const RootsOfUnityTable&) { return "roots_of_unity"; },
                        [](const ConfluentTable&) { return "confluent"; },
                        [](const ArcTable&) { return "arc"; },
                        [](const ExplicitTable&) { return "explicit"; },
                    },
                    kind_);
}

std::vector<Complex> TriangularTable::row(int n) const {
  if (n < 1 || n > max_row_)
    throw ConfigError("table row " + std::to_string(n) + " out of range [1, " +
                      std::to_string(max_row_) + "]");
  const auto count = static_cast<std::size_t>(n);
  return std::visit(
      overloaded{
          [&](const RootsOfUnityTable& t) {
            std::vector<Complex> pts(count);
            for (int k = 0; k < n; ++k)
              pts[static_cast<std::size_t>(k)] = t.center + std::polar(t.radius, 2.0 * kPi * k / n + t.rotation);
            return pts;
          },
          [&](const ConfluentTable& t) { return std::vector<Complex>(count, t.point); },
          [&](const ArcTable& t) {
            std::vector<Complex> pts(count);
            for (int k = 0; k < n; ++k) {
              const Real s = n == 1 ? 0.5 : Real(k) / (n - 1);
              pts[static_cast<std::size_t>(k)] = t.center + std::polar(t.radius, t.theta0 + s * (t.theta1 - t.theta0));
            }
            return pts;
          },
          [&](const ExplicitTable& t) { return t.rows[count - 1]; },
      },
      kind_);
}

Polynomial TriangularTable::omega(int n) const {
  const auto pts = row(n);
  return poly_from_roots(std::span<const Complex>(pts), 1.0);
}

SupportClass TriangularTable::support_class(const CompactSet& E, int up_to) const {
  bool all_boundary = true;
  for (int n = 1; n <= std::min(up_to, max_row_); ++n) {
    for (const auto& z : row(n)) {
      if (!E.contains(z, 1e-9)) return SupportClass::outside;
      if (!E.on_boundary(z, 1e-9)) all_boundary = false;
    }
  }
  return all_boundary ? SupportClass::boundary : SupportClass::interior;
}

TriangularTable parse_explicit_table(const std::string& csv_text) {
  std::istringstream in(csv_text);
  std::string line;
  std::map<int, std::map<int, Complex>> cells;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1 && line.rfind("row", 0) == 0) continue;
    std::istringstream ls(line);
    std::string f[4];
    for (auto& s : f)
      if (!std::getline(ls, s, ','))
        throw ConfigError("explicit table line " + std::to_string(line_no) + ": expected row,k,re,im");
    try {
      cells[std::stoi(f[0])][std::stoi(f[1])] = Complex(std::stod(f[2]), std::stod(f[3]));
    } catch (const std::logic_error&) {
      throw ConfigError("explicit table line " + std::to_string(line_no) + ": malformed number");
    }
  }
  ExplicitTable t;
  for (const auto& [row, ks] : cells) {
    if (row != static_cast<int>(t.rows.size()) + 1)
      throw ConfigError("explicit table rows must be consecutive starting at 1");
    std::vector<Complex> pts;
    for (const auto& [k, z] : ks) {
      if (k != static_cast<int>(pts.size()) + 1)
        throw ConfigError("explicit table row " + std::to_string(row) + ": k must run 1..row");
      pts.push_back(z);
    }
    t.rows.push_back(std::move(pts));
  }
  const int rows = static_cast<int>(t.rows.size());
  return TriangularTable(std::move(t), rows);
}

TriangularTable load_explicit_table(const std::filesystem::path& csv_path) {
  std::ifstream in(csv_path);
  if (!in) throw ConfigError("cannot open explicit table " + csv_path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_explicit_table(ss.str());
}

Real counting_measure_mass(const CountingMeasure& m, const MassRegion& region) {
  std::visit(overloaded{
                 [](const DiskRegion& d) {
                   if (!(d.radius > 0.0)) throw ConfigError("mass region: disk radius must be positive");
                 },
                 [](const AnnulusRegion& a) {
                   if (!(a.outer > 0.0) || a.inner > a.outer)
                     throw ConfigError("mass region: annulus radii must satisfy 0 <= inner <= outer, outer > 0");
                 },
             },
             region);
  if (m.empty()) return 0.0;
  constexpr Real tol = 1e-12;
  std::size_t hits = 0;
  for (const auto& z : m.points()) {
    const bool in = std::visit(overloaded{
                                   [&](const DiskRegion& d) { return std::abs(z - d.center) <= d.radius + tol; },
                                   [&](const AnnulusRegion& a) {
                                     const Real r = std::abs(z - a.center);
                                     return r >= a.inner - tol && r <= a.outer + tol;
                                   },
                               },
                               region);
    if (in) ++hits;
  }
  return static_cast<Real>(hits) / static_cast<Real>(m.size());
}

}  // namespace padelab
