#include "padelab/report_io.hpp"

#include <algorithm>
#include <ostream>

#include "padelab/config.hpp"
#include "padelab/format.hpp"

namespace padelab {

using nlohmann::json;

namespace {

const char* flag(bool b) { return b ? "1" : "0"; }

json range_json(const NRange& r) { return json::array({r.lo, r.hi}); }

json optional_real(const std::optional<Real>& v) { return v ? real_json(*v) : json(nullptr); }

json poly_json(const Polynomial& p) {
  json a = json::array();
  for (const auto& c : p.coefficients()) a.push_back(complex_json(c));
  return a;
}

json roots_json(const RootSet& roots) {
  json a = json::array();
  for (const auto& r : roots.roots())
    a.push_back({{"re", real_json(r.value.real())}, {"im", real_json(r.value.imag())}, {"multiplicity", r.multiplicity}});
  return a;
}

void write_roots(std::ostream& out, int n, const char* kind, const RootSet& roots) {
  for (const auto& r : roots.roots())
    out << n << ',' << kind << ',' << format_real(r.value.real()) << ',' << format_real(r.value.imag()) << ','
        << r.multiplicity << '\n';
}

}  // namespace

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (const char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

void write_rates_csv(std::ostream& out, const RateSeries& s) {
  out << "n,e_n,e_n_full,root_rate,target,pole_error,k_n,built,ill_conditioned,degenerate\n";
  for (const auto& r : s.rows) {
    out << r.n << ',' << format_real(r.e_n) << ',' << format_real(r.e_n_full) << ',' << format_real(r.root_rate)
        << ',' << format_real(s.target) << ',' << format_real(r.pole_error) << ',' << r.k_n << ','
        << flag(r.built) << ',' << flag(r.ill_conditioned) << ',' << flag(r.degenerate) << '\n';
  }
}

void write_exactness_csv(std::ostream& out, const ExactnessReport& r) {
  out << "n,h_n,target,in_lambda\n";
  for (const auto& row : r.rows)
    out << row.n << ',' << format_real(row.built ? row.h_n : std::nan("")) << ',' << format_real(r.target) << ','
        << flag(row.in_lambda) << '\n';
}

void write_distribution_csv(std::ostream& out, std::span<const DistributionRow> rows) {
  out << "n,discrepancy,skipped\n";
  for (const auto& r : rows) out << r.n << ',' << format_real(r.discrepancy) << ',' << r.skipped << '\n';
}

void write_clusters_csv(std::ostream& out, const ClusterReport& r) {
  out << "z0_re,z0_im,n,mass\n";
  for (const auto& row : r.rows) {
    const Complex z0 = r.boundary[static_cast<std::size_t>(row.point)];
    out << format_real(z0.real()) << ',' << format_real(z0.imag()) << ',' << row.n << ','
        << format_real(row.mass) << '\n';
  }
}

void write_roots_csv(std::ostream& out, const BuildSweep& sweep) {
  out << "n,kind,re,im,multiplicity\n";
  for (const auto& e : sweep.entries) {
    if (!e.approx) continue;
    const PadeApproximant a = to_binary64(*e.approx);
    write_roots(out, e.n, "zero", a.free_zeros);
    write_roots(out, e.n, "pole", a.free_poles);
  }
}

json approximant_json(const PadeApproximant& a) {
  json inner = json::array();
  for (const auto& z : a.inner_poles) inner.push_back(complex_json(z));
  return {{"n", a.n},
          {"m", a.m},
          {"P", poly_json(a.P)},
          {"Q", poly_json(a.Q)},
          {"free_zeros", roots_json(a.free_zeros)},
          {"free_poles", roots_json(a.free_poles)},
          {"inner_poles", inner},
          {"k_n", a.k_n},
          {"residual", real_json(a.residual)},
          {"condition", real_json(a.condition)},
          {"ill_conditioned", a.ill_conditioned},
          {"degenerate", a.degenerate},
          {"null_dimension", a.null_dimension},
          {"cancelled", a.cancelled}};
}

json approximants_json(const BuildSweep& sweep) {
  json a = json::array();
  for (const auto& e : sweep.entries) {
    if (e.approx) {
      a.push_back(approximant_json(to_binary64(*e.approx)));
    } else {
      a.push_back({{"n", e.n}, {"m", sweep.m}, {"error", e.error}, {"ill_conditioned", e.ill_conditioned_failure}});
    }
  }
  return a;
}

json sweep_summary(const BuildSweep& sweep) {
  json failures = json::array();
  int ill = 0, degenerate = 0;
  for (const auto& e : sweep.entries) {
    if (!e.approx) {
      failures.push_back({{"n", e.n}, {"error", e.error}});
      continue;
    }
    const auto [is_ill, is_deg] =
        std::visit([](const auto& a) { return std::pair{a.ill_conditioned, a.degenerate}; }, *e.approx);
    ill += is_ill;
    degenerate += is_deg;
  }
  json poles = json::array();
  for (const auto& p : sweep.meromorphy.poles_inside)
    poles.push_back({{"location", complex_json(p.location)}, {"order", p.order}});
  json levels = json::array();
  for (const Real v : sweep.meromorphy.pole_levels) levels.push_back(real_json(v));
  return {{"m", sweep.m},
          {"n_range", range_json(sweep.range)},
          {"precision", std::string(to_string(sweep.precision))},
          {"R_m", real_json(sweep.meromorphy.radius)},
          {"poles_inside", poles},
          {"pole_levels", levels},
          {"built", sweep.built()},
          {"ill_conditioned", ill},
          {"degenerate", degenerate},
          {"failures", failures}};
}

json rates_summary(const RateSeries& s) {
  int built = 0;
  for (const auto& r : s.rows) built += r.built;
  return {{"rho_K", real_json(s.rho_K)},
          {"R_m", real_json(s.R_m)},
          {"target", real_json(s.target)},
          {"eps", real_json(s.eps)},
          {"omega_radius_sum", real_json(s.omega_radius_sum)},
          {"tail", range_json(s.tail)},
          {"tail_geomean", real_json(s.tail_geomean)},
          {"pole_tail_rate", real_json(s.pole_tail_rate)},
          {"inferred_R", real_json(s.inferred_R)},
          {"upper_bound_ok", s.upper_bound_ok},
          {"exact", s.exact},
          {"built", built}};
}

json exactness_summary(const ExactnessReport& r) {
  return {{"target", real_json(r.target)},
          {"delta", real_json(r.delta)},
          {"tail", range_json(r.tail)},
          {"lambda", r.lambda},
          {"lambda_size", r.lambda.size()},
          {"density_ratio", optional_real(r.density_ratio)},
          {"tail_density_ratio", optional_real(r.tail_density_ratio)},
          {"degenerate", r.degenerate},
          {"diagnostic", r.diagnostic}};
}

json distribution_summary(std::span<const DistributionRow> rows, std::span<const Complex> test_points) {
  json pts = json::array();
  for (const auto& z : test_points) pts.push_back(complex_json(z));
  json n = json::array();
  Real worst = 0.0;
  int skipped = 0;
  for (const auto& r : rows) {
    n.push_back(r.n);
    worst = std::max(worst, r.discrepancy);
    skipped += r.skipped;
  }
  json last = rows.empty() ? json(nullptr) : real_json(rows.back().discrepancy);
  return {{"n", n}, {"test_points", pts}, {"max_discrepancy", real_json(worst)}, {"last_discrepancy", last},
          {"skipped", skipped}};
}

json clusters_summary(const ClusterReport& r) {
  return {{"radius", real_json(r.radius)},
          {"tail", range_json(r.tail)},
          {"samples", r.boundary.size()},
          {"orders", r.orders},
          {"no_lambda", r.no_lambda},
          {"summary", real_json(r.summary)}};
}

}  // namespace padelab
