#include "padelab/lab.hpp"

#include <algorithm>
#include <cmath>

namespace padelab {

namespace {

template <class A>
using RealOf = typename A::C::value_type;

template <class R>
std::vector<Complex> narrow_all(std::span<const std::complex<R>> v) {
  std::vector<Complex> out;
  out.reserve(v.size());
  for (const auto& z : v) out.push_back(narrow(z));
  return out;
}

template <class R>
RootSet narrow_roots(const BasicRootSet<R>& roots) {
  std::vector<Root> out;
  for (const auto& r : roots.roots()) out.push_back({narrow(r.value), r.multiplicity});
  return RootSet(std::move(out));
}

void require_inside(const LevelRegion& D, std::span<const Complex> pts, const char* who) {
  if (D.unbounded()) return;
  for (const auto& z : pts)
    if (!D.contains(z)) throw ConfigError(std::string(who) + ": K is not inside D_{m,mu}");
}

// Sampled test: K and E share a sample, or K's boundary passes within one
// boundary spacing of E's boundary (crossing curves).
bool sets_meet(const CompactSet& K, const CompactSet& E, const GridSpec& grid) {
  for (const auto& z : K.samples(grid))
    if (E.contains(z, 0.0)) return true;
  for (const auto& z : E.samples(grid))
    if (K.contains(z, 0.0)) return true;
  const auto kb = K.boundary_samples(grid.boundary);
  Real spacing = 0.0;
  for (std::size_t i = 0; i + 1 < kb.size(); ++i) spacing = std::max(spacing, std::abs(kb[i + 1] - kb[i]));
  for (const auto& z : kb)
    if (E.distance_to_boundary(z) <= spacing) return true;
  return false;
}

Real geometric_mean(const std::vector<Real>& v) {
  if (v.empty()) return 0.0;
  Real acc = 0.0;
  for (const Real x : v) {
    if (!(x > 0.0)) return x == 0.0 ? 0.0 : std::numeric_limits<Real>::quiet_NaN();
    acc += std::log(x);
  }
  return std::exp(acc / static_cast<Real>(v.size()));
}

std::optional<Real> max_ratio(const std::vector<int>& seq) {
  if (seq.size() < 2) return std::nullopt;
  Real best = 0.0;
  for (std::size_t k = 0; k + 1 < seq.size(); ++k)
    best = std::max(best, static_cast<Real>(seq[k + 1]) / seq[k]);
  return best;
}

// f reduces to a rational function of type (p, q) with q <= m and p <= n_min.
bool reproduced_exactly(const TargetFunction& f, int m, int n_min) {
  if (!f.is_rational()) return false;
  const Polynomial num = f.numerator() + f.entire_polynomial() * f.denominator();
  return f.denominator().degree() <= m && num.degree() <= n_min;
}

}  // namespace

template <class R>
PadeApproximant to_binary64(const BasicPadeApproximant<R>& a) {
  if constexpr (std::is_same_v<R, Real>) {
    return a;
  } else {
    PadeApproximant out;
    out.n = a.n;
    out.m = a.m;
    out.P = a.P.template cast<Real>();
    out.Q = a.Q.template cast<Real>();
    out.free_zeros = narrow_roots(a.free_zeros);
    out.free_poles = narrow_roots(a.free_poles);
    out.inner_poles = narrow_all<R>(a.inner_poles);
    out.k_n = a.k_n;
    out.degenerate = a.degenerate;
    out.null_dimension = a.null_dimension;
    out.cancelled = a.cancelled;
    out.residual = a.residual;
    out.residual_scale = a.residual_scale;
    out.condition = a.condition;
    out.ill_conditioned = a.ill_conditioned;
    out.nodes = a.nodes;
    return out;
  }
}

template PadeApproximant to_binary64(const BasicPadeApproximant<Real>&);
template PadeApproximant to_binary64(const BasicPadeApproximant<Quad>&);

PadeApproximant to_binary64(const AnyApproximant& a) {
  return std::visit([](const auto& x) { return to_binary64(x); }, a);
}

const SweepEntry* BuildSweep::find(int n) const {
  if (!range.contains(n)) return nullptr;
  return &entries[static_cast<std::size_t>(n - range.lo)];
}

int BuildSweep::built() const {
  return static_cast<int>(std::count_if(entries.begin(), entries.end(),
                                        [](const SweepEntry& e) { return e.approx.has_value(); }));
}

LevelRegion meromorphy_region(const LabSetup& setup, const MeromorphyReport& report) {
  return LevelRegion(setup.mu, report.radius);
}

BuildSweep build_sweep(const LabSetup& setup, NRange range) {
  if (range.size() <= 0) throw ConfigError("build_sweep: empty n range");
  if (range.lo < 0) throw ConfigError("build_sweep: n must be non-negative");
  BuildSweep sweep;
  sweep.m = setup.m;
  sweep.range = range;
  sweep.precision = setup.precision;
  sweep.meromorphy = radius_of_meromorphy(setup.f, setup.mu, setup.m, &setup.E);
  PadeOptions opts = setup.pade;
  opts.domain = meromorphy_region(setup, sweep.meromorphy);

  sweep.entries.resize(static_cast<std::size_t>(range.size()));
  kernels::for_each_index(
      sweep.entries.size(),
      [&](std::size_t i) {
        SweepEntry& e = sweep.entries[i];
        e.n = range.lo + static_cast<int>(i);
        try {
          if (setup.precision == Precision::quad)
            e.approx = build_pade<Quad>(setup.f, setup.table, e.n, setup.m, opts);
          else
            e.approx = build_pade<Real>(setup.f, setup.table, e.n, setup.m, opts);
        } catch (const IllConditionedBuild& err) {
          e.error = err.what();
          e.ill_conditioned_failure = true;
        } catch (const NumericalError& err) {
          e.error = err.what();
        }
      },
      setup.exec);
  if (sweep.built() == 0)
    throw NumericalError("all builds failed: " + sweep.entries.front().error);
  return sweep;
}

ExceptionalSet sweep_exceptional_set(const BuildSweep& sweep, Real eps) {
  if (!(eps > 0.0)) throw ConfigError("exceptional set: eps must be positive");
  ExceptionalSet omega;
  omega.epsilon = eps;
  if (sweep.m < 1) return omega;
  for (const auto& e : sweep.entries) {
    if (!e.approx || e.n < 1) continue;
    omega.merge(std::visit([&](const auto& a) { return exceptional_set(a, eps); }, *e.approx));
  }
  return omega;
}

RateSeries rate_sequence(const LabSetup& setup, const BuildSweep& sweep, Real eps,
                         std::optional<NRange> tail) {
  if (!(eps > 0.0)) throw ConfigError("rate_sequence: eps must be positive");
  RateSeries out;
  out.eps = eps;
  out.tail = tail.value_or(sweep.range.upper_half());
  out.R_m = sweep.meromorphy.radius;
  const LevelRegion D = meromorphy_region(setup, sweep.meromorphy);
  const auto pts = setup.K.samples(setup.grid);
  require_inside(D, pts, "rate_sequence");
  out.rho_K = rho_extrema(setup.K, setup.mu, setup.grid, setup.exec).rho_max;
  out.target = std::isinf(out.R_m) ? 0.0 : out.rho_K / out.R_m;
  out.exact = reproduced_exactly(setup.f, setup.m, out.tail.lo);

  const ExceptionalSet omega = sweep_exceptional_set(sweep, eps);
  out.omega_radius_sum = omega.radius_sum();
  const auto& true_poles = sweep.meromorphy.poles_inside;

  std::vector<Real> tail_rates, tail_pole_rates;
  for (const auto& e : sweep.entries) {
    RateRow row;
    row.n = e.n;
    if (!e.approx) {
      row.error = e.error;
      row.ill_conditioned = e.ill_conditioned_failure;
      out.rows.push_back(std::move(row));
      continue;
    }
    row.built = true;
    std::visit(
        [&](const auto& a) {
          using R = RealOf<std::decay_t<decltype(a)>>;
          auto err = [&](Complex z) {
            const auto w = widen<R>(z);
            return setup.f.template eval<R>(w) - a(w);
          };
          row.e_n = sup_norm_on_grid(err, pts, &omega, setup.exec);
          row.e_n_full = sup_norm_on_grid(err, pts, nullptr, setup.exec);
          row.k_n = a.k_n;
          row.ill_conditioned = a.ill_conditioned;
          row.degenerate = a.degenerate;
          const auto free = narrow_all<R>(a.free_poles.expanded());
          for (const auto& p : true_poles) {
            Real best = kInfinity;
            for (const auto& q : free) best = std::min(best, std::abs(q - p.location));
            row.pole_error = std::max(row.pole_error, best);
          }
        },
        *e.approx);
    row.root_rate = e.n > 0 ? std::pow(row.e_n, 1.0 / e.n) : row.e_n;
    if (out.tail.contains(e.n) && e.n > 0) {
      tail_rates.push_back(row.root_rate);
      if (!true_poles.empty()) tail_pole_rates.push_back(std::pow(row.pole_error, 1.0 / e.n));
    }
    out.rows.push_back(std::move(row));
  }
  out.tail_geomean = geometric_mean(tail_rates);
  out.pole_tail_rate = geometric_mean(tail_pole_rates);
  out.inferred_R = out.tail_geomean > 0.0 ? out.rho_K / out.tail_geomean : kInfinity;
  out.upper_bound_ok = std::isinf(out.R_m) || out.exact || out.inferred_R <= out.R_m * (1.0 + kUpperBoundTolerance);
  return out;
}

RateSeries rate_sequence(const LabSetup& setup, Real eps, NRange range, std::optional<NRange> tail) {
  return rate_sequence(setup, build_sweep(setup, range), eps, tail);
}

ExactnessReport exactness_subsequence(const LabSetup& setup, const BuildSweep& sweep, Real delta,
                                      std::optional<NRange> tail) {
  ExactnessReport out;
  out.delta = delta;
  out.tail = tail.value_or(sweep.range.upper_half());
  const auto& mer = sweep.meromorphy;
  const LevelRegion D = meromorphy_region(setup, mer);
  const auto pts = setup.K.samples(setup.grid);
  require_inside(D, pts, "exactness_subsequence");
  if (sets_meet(setup.K, setup.E, setup.grid)) throw ConfigError("exactness_subsequence: K meets E");
  const Real rho_K = rho_extrema(setup.K, setup.mu, setup.grid, setup.exec).rho_max;
  out.degenerate = std::isinf(mer.radius);
  out.target = out.degenerate ? 0.0 : rho_K / mer.radius;

  for (const auto& e : sweep.entries) {
    ExactnessRow row;
    row.n = e.n;
    if (e.approx && e.n > 0) {
      row.built = true;
      std::visit(
          [&](const auto& a) {
            using R = RealOf<std::decay_t<decltype(a)>>;
            const auto Qf = mer.pole_polynomial.template cast<R>();
            auto g = [&](Complex z) {
              const auto w = widen<R>(z);
              const auto qf = Qf(w);
              return setup.f.template eval<R>(w) * qf * a.Q(w) - qf * a.P(w);
            };
            row.h_n = std::pow(sup_norm_on_grid(g, pts, nullptr, setup.exec), 1.0 / e.n);
          },
          *e.approx);
    }
    out.rows.push_back(row);
  }

  if (out.degenerate) {
    out.diagnostic = "degenerate: f has at most m poles, errors sit at the numerical floor; Lambda empty by convention";
  } else if (!(delta > 0.0)) {
    out.diagnostic = "delta = 0: exact equality with the target has measure zero; Lambda empty";
  } else {
    for (auto& row : out.rows) {
      row.in_lambda = row.built && std::abs(row.h_n - out.target) <= delta;
      if (row.in_lambda) out.lambda.push_back(row.n);
    }
    if (out.lambda.empty()) out.diagnostic = "no order within delta of the target";
  }
  out.density_ratio = max_ratio(out.lambda);
  std::vector<int> in_tail;
  for (const int n : out.lambda)
    if (out.tail.contains(n)) in_tail.push_back(n);
  out.tail_density_ratio = max_ratio(in_tail);
  return out;
}

ExactnessReport exactness_subsequence(const LabSetup& setup, Real delta, NRange range,
                                      std::optional<NRange> tail) {
  return exactness_subsequence(setup, build_sweep(setup, range), delta, tail);
}

std::vector<DistributionRow> interpolation_distribution_test(const TriangularTable& table,
                                                             const Measure& mu, const CompactSet& E,
                                                             std::span<const int> n_list,
                                                             std::span<const Complex> test_points,
                                                             kernels::Exec exec) {
  for (const auto& z : test_points)
    if (E.contains(z, 0.0)) throw ConfigError("distribution test: test point lies in E");
  std::vector<DistributionRow> out(n_list.size());
  kernels::for_each_index(
      n_list.size(),
      [&](std::size_t i) {
        const Measure counting = Measure::discrete(table.row(n_list[i]));
        const auto d = potential_discrepancy(counting, mu, test_points);
        out[i] = {n_list[i], d.value, d.skipped};
      },
      exec);
  return out;
}

std::vector<Real> cluster_masses(std::span<const Complex> centers, Real r,
                                 const std::vector<std::vector<Complex>>& zero_lists,
                                 kernels::Exec exec) {
  if (!(r > 0.0)) throw ConfigError("cluster scan: radius must be positive");
  std::vector<CountingMeasure> measures;
  measures.reserve(zero_lists.size());
  for (const auto& z : zero_lists) measures.emplace_back(z);
  std::vector<Real> out(centers.size() * zero_lists.size(), 0.0);
  kernels::for_each_index(
      centers.size(),
      [&](std::size_t i) {
        for (std::size_t j = 0; j < measures.size(); ++j)
          out[i * measures.size() + j] =
              measures[j].empty() ? 0.0 : counting_measure_mass(measures[j], DiskRegion{centers[i], r});
      },
      exec);
  return out;
}

ClusterReport zero_cluster_scan(const ExactnessReport& exactness, const BuildSweep& sweep,
                                std::vector<Complex> boundary, Real r, std::optional<NRange> tail,
                                kernels::Exec exec) {
  ClusterReport out;
  out.radius = r;
  out.tail = tail.value_or(exactness.tail);
  out.boundary = std::move(boundary);
  for (const int n : exactness.lambda)
    if (out.tail.contains(n) && sweep.find(n) && sweep.find(n)->approx) out.orders.push_back(n);
  if (out.orders.empty()) {
    out.no_lambda = true;
    for (const auto& e : sweep.entries)
      if (e.approx && out.tail.contains(e.n)) out.orders.push_back(e.n);
  }

  std::vector<std::vector<Complex>> zeros;
  for (const int n : out.orders)
    zeros.push_back(std::visit(
        [](const auto& a) {
          using R = RealOf<std::decay_t<decltype(a)>>;
          return narrow_all<R>(a.free_zeros.expanded());
        },
        *sweep.find(n)->approx));

  const auto masses = cluster_masses(out.boundary, r, zeros, exec);
  out.point_max.assign(out.boundary.size(), 0.0);
  for (std::size_t i = 0; i < out.boundary.size(); ++i)
    for (std::size_t j = 0; j < out.orders.size(); ++j) {
      const Real mass = masses[i * out.orders.size() + j];
      out.rows.push_back({static_cast<int>(i), out.orders[j], mass});
      out.point_max[i] = std::max(out.point_max[i], mass);
    }
  for (const Real v : out.point_max) out.summary = std::max(out.summary, v);
  return out;
}

ClusterReport zero_cluster_scan(const ExactnessReport& exactness, const BuildSweep& sweep,
                                const LevelRegion& D, Real r, int boundary_samples,
                                std::optional<NRange> tail, int grid_cells, kernels::Exec exec) {
  if (D.unbounded()) throw ConfigError("cluster scan: D is the whole plane, it has no boundary");
  const LevelGrid grid = level_grid(D, level_region_box(D), grid_cells, grid_cells, exec);
  return zero_cluster_scan(exactness, sweep, trace_level_boundary(D, grid, boundary_samples), r, tail, exec);
}

}  // namespace padelab
