// Acceptance run: one PASS/FAIL line per item E1..E7, nonzero exit on failure.
#include <algorithm>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "../helpers.hpp"
#include "padelab/config.hpp"
#include "padelab/errors.hpp"
#include "padelab/lab.hpp"

using namespace padelab;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

// Montessus model on the unit circle: exp(-U) = max(|z|, 1), so R_2 = 4
// (third pole) and rho_K = 1.5 on K = {|z| = 1.5}.
constexpr Real kMontessusR = 4.0;
constexpr Real kMontessusTarget = 1.5 / 4.0;

struct Experiment {
  ExperimentConfig cfg;
  LabSetup setup;
  BuildSweep sweep;
};

Experiment& preset_run(const std::string& name) {
  static std::vector<std::pair<std::string, std::unique_ptr<Experiment>>> cache;
  for (auto& [n, e] : cache)
    if (n == name) return *e;
  auto cfg = preset_config(name);
  auto setup = make_setup(cfg);
  auto sweep = build_sweep(setup, cfg.n_range);
  cache.emplace_back(name, std::make_unique<Experiment>(Experiment{std::move(cfg), std::move(setup), std::move(sweep)}));
  return *cache.back().second;
}

template <class F>
auto with_approx(const AnyApproximant& a, F&& f) {
  return std::visit(std::forward<F>(f), a);
}

Real q_abs(const AnyApproximant& a, Complex z) {
  return with_approx(a, [&](const auto& p) {
    using C = typename std::decay_t<decltype(p)>::C;
    return static_cast<Real>(std::abs(p.Q(C(z.real(), z.imag()))));
  });
}

// E1: confluent table at 0, f = e^z.
void e1(Outcome& out) {
  const auto f = TargetFunction::exponential();
  const TriangularTable table(ConfluentTable{0.0}, 13);
  const auto a = build_pade(f, table, 1, 1);
  const Complex s = 1.0 / a.Q[0];
  const Real err11 = std::max({std::abs(a.P[0] * s - 1.0), std::abs(a.P[1] * s - 0.5), std::abs(a.Q[0] * s - 1.0),
                               std::abs(a.Q[1] * s + 0.5)});
  out.check(err11 <= 1e-10, "(1,1) coefficients");
  Real worst = 0.0;
  int orders = 0;
  for (int m = 0; m <= 12; ++m)
    for (int n = 0; n + m <= 12; ++n) {
      const auto want = testing::taylor_pade_oracle(f.taylor(0.0, n + m), n, m);
      const auto got = build_pade(f, table, n, m);
      const Complex t = 1.0 / got.Q[0];
      for (int k = 0; k <= n; ++k) worst = std::max(worst, std::abs(got.P[k] * t - want.p[static_cast<std::size_t>(k)]));
      for (int k = 0; k <= m; ++k) worst = std::max(worst, std::abs(got.Q[k] * t - want.q[static_cast<std::size_t>(k)]));
      ++orders;
    }
  out.check(worst <= 1e-8, "Taylor oracle agreement");
  out.detail << "(1,1) err " << err11 << ", " << orders << " orders n+m<=12 max err " << worst;
}

// E2: random rationals of type (n, m) are reproduced.
void e2(Outcome& out) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> pick_n(0, 8), pick_m(0, 3);
  const TriangularTable table(RootsOfUnityTable{}, 12);
  const Real probe = 0.9;
  int good = 0, unflagged = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = pick_n(rng), m = pick_m(rng);
    std::vector<Complex> poles, zeros;
    for (int k = 0; k < m; ++k) {
      // Half the poles inside the unit disk, all away from the nodes and the probe circle.
      poles.push_back(k % 2 == 0 ? testing::random_complex(rng, 1.3, 3.0) : testing::random_complex(rng, 0.2, 0.6));
    }
    for (int k = 0; k < n; ++k) zeros.push_back(testing::random_complex(rng, 0.0, 2.0));
    const Complex lead = testing::random_complex(rng, 0.5, 5.0);
    const auto f = TargetFunction::rational(poly_from_roots(zeros, lead), poly_from_roots(poles));
    Real scale = 1.0, gap = 0.0;
    bool flagged = false;
    try {
      const auto a = build_pade(f, table, n, m);
      flagged = a.ill_conditioned;
      for (int k = 0; k < 256; ++k) {
        const Complex z = std::polar(probe, 2.0 * kPi * k / 256.0);
        scale = std::max(scale, std::abs(f(z)));
        gap = std::max(gap, std::abs(f(z) - a(z)));
      }
    } catch (const IllConditionedBuild&) {
      flagged = true;
      gap = kInfinity;
    } catch (const NumericalError&) {
      gap = kInfinity;
    }
    if (gap <= 1e-8 * scale) {
      ++good;
    } else if (!flagged) {
      ++unflagged;
    }
  }
  out.check(good >= 48, "at least 48/50 reproduced");
  out.check(unflagged == 0, "every failure flagged ill-conditioned");
  out.detail << good << "/50 reproduced, " << unflagged << " unflagged failures";
}

// E3: rates and pole convergence on the Montessus preset.
RateSeries e3_rates;
void e3(Outcome& out) {
  auto& ex = preset_run("montessus-m2");
  e3_rates = rate_sequence(ex.setup, ex.sweep, 0.01, NRange{24, 44});
  const auto& r = e3_rates;
  out.check(std::abs(r.R_m - kMontessusR) <= 1e-12, "R_m = 4");
  out.check(std::abs(r.target - kMontessusTarget) <= 1e-12, "target 0.375");
  out.check(std::abs(r.tail_geomean - kMontessusTarget) <= 0.05, "tail geometric mean within 0.05");
  out.check(r.pole_tail_rate < 0.9, "pole tail rate < 0.9");
  Real max_pole_error = 0.0;
  for (const auto& row : r.rows)
    if (row.built && row.n >= 24 && row.n <= 44) max_pole_error = std::max(max_pole_error, row.pole_error);
  out.detail << "target " << r.target << ", tail geomean " << r.tail_geomean << ", pole tail rate "
             << r.pole_tail_rate << ", max tail pole error " << max_pole_error;
}

// E4: node distribution, forward check and negative control.
void e4(Outcome& out) {
  const Measure mu = Measure::uniform_circle(0.0, 1.0);
  const CompactSet E = CompactSet::circle(0.0, 1.0);
  const std::vector<Complex> pts{2.0, Complex(0.0, 1.8), -2.5};
  const std::vector<int> n64{64};
  const auto ru = interpolation_distribution_test(TriangularTable(RootsOfUnityTable{}, 64), mu, E, n64, pts);
  // Closed form: the nodes are the zeros of z^64 - 1.
  Real oracle = 0.0;
  for (const auto& z : pts) oracle = std::max(oracle, std::abs(-std::log(std::abs(std::pow(z, 64) - 1.0)) / 64.0 + std::log(std::abs(z))));
  out.check(ru[0].discrepancy <= 1e-2, "roots of unity discrepancy <= 1e-2");
  out.check(std::abs(ru[0].discrepancy - oracle) <= 1e-12, "closed-form discrepancy");

  auto& arc = preset_run("arc-control");
  const std::vector<Complex> z2{2.0};
  const auto ad = interpolation_distribution_test(arc.setup.table, mu, E, n64, z2);
  out.check(ad[0].discrepancy > 0.1, "arc discrepancy > 0.1");
  const auto ex = exactness_subsequence(arc.setup, arc.sweep, 0.05, NRange{24, 44});
  // Sparse: fewer than a quarter of the built orders.
  const bool sparse = 4 * static_cast<int>(ex.lambda.size()) < arc.sweep.built();
  out.check(ex.lambda.empty() || sparse, "arc Lambda empty or sparse");
  out.detail << "roots of unity " << ru[0].discrepancy << " (oracle " << oracle << "), arc " << ad[0].discrepancy
             << ", arc |Lambda| " << ex.lambda.size() << " of " << arc.sweep.built();
}

// E5: exceptional-set content of every preset sweep.
void e5(Outcome& out) {
  int sweeps = 0;
  for (const auto& name : preset_names()) {
    const auto cfg = preset_config(name);
    if (!cfg.wants(Stage::sweep) && !cfg.wants(Stage::rates)) continue;
    auto& ex = preset_run(name);
    for (const Real eps : {ex.cfg.eps, 0.1, 1e-3}) {
      Real oracle = 0.0;
      for (const auto& e : ex.sweep.entries)
        if (e.approx && ex.sweep.m > 0) {
          const int k = with_approx(*e.approx, [](const auto& p) { return p.k_n; });
          oracle += k * eps / (2.0 * ex.sweep.m * static_cast<Real>(e.n) * e.n);
        }
      const Real sum = sweep_exceptional_set(ex.sweep, eps).radius_sum();
      out.check(sum <= eps, name + " radius sum <= eps");
      out.check(std::abs(sum - oracle) <= 1e-12 * eps, name + " radius sum matches count");
    }
    ++sweeps;
  }
  out.detail << sweeps << " preset sweeps, 3 eps values each";
}

// E6: zero clusters along the boundary of D.
void e6(Outcome& out) {
  auto& ex = preset_run("montessus-m2");
  const auto exact = exactness_subsequence(ex.setup, ex.sweep, 0.05, NRange{24, 44});
  const LevelRegion D(Measure::uniform_circle(0.0, 1.0), kMontessusR);
  const auto scan = zero_cluster_scan(exact, ex.sweep, D, 0.5, 256, NRange{20, 48});
  out.check(!scan.no_lambda, "Lambda nonempty");
  out.check(scan.summary >= 0.05, "summary >= 0.05");

  std::mt19937_64 rng(6);
  std::vector<Complex> centers;
  for (int k = 0; k < 256; ++k) centers.push_back(std::polar(4.0, 2.0 * kPi * k / 256.0));
  std::vector<std::vector<Complex>> lists;
  for (int l = 0; l < 20; ++l) {
    std::vector<Complex> zeros;
    for (int k = 0; k < 3 + 2 * l; ++k) zeros.push_back(testing::random_complex(rng, 3.0, 5.0));
    zeros.push_back(centers[static_cast<std::size_t>(7 * l)] + std::polar(0.5, 0.3 * l));
    lists.push_back(zeros);
  }
  const auto masses = cluster_masses(centers, 0.5, lists);
  int mismatches = 0;
  for (std::size_t c = 0; c < centers.size(); ++c)
    for (std::size_t l = 0; l < lists.size(); ++l)
      mismatches += masses[c * lists.size() + l] != testing::brute_force_mass(lists[l], centers[c], 0.5);
  out.check(mismatches == 0, "brute-force masses");
  out.detail << "summary " << scan.summary << " over " << scan.orders.size() << " orders, |Lambda| "
             << exact.lambda.size() << ", " << mismatches << " brute-force mismatches";
}

// Greedy Leja order of distinct points: largest modulus first, then the
// maximizer of the product of distances.
std::vector<Complex> greedy_leja(std::vector<Complex> pts) {
  std::vector<Complex> out;
  auto first = std::max_element(pts.begin(), pts.end(), [](Complex a, Complex b) { return std::abs(a) < std::abs(b); });
  out.push_back(*first);
  pts.erase(first);
  while (!pts.empty()) {
    std::size_t best = 0;
    Real best_v = -1.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      Real v = 1.0;
      for (const auto& x : out) v *= std::abs(pts[i] - x);
      if (v > best_v) best_v = v, best = i;
    }
    out.push_back(pts[best]);
    pts.erase(pts.begin() + static_cast<std::ptrdiff_t>(best));
  }
  return out;
}

// E7: property suites.
void e7(Outcome& out) {
  std::mt19937_64 rng(7);
  int props = 0;
  auto prop = [&](const std::string& name, bool ok) {
    ++props;
    out.check(ok, name);
  };

  {  // superposition
    std::vector<Complex> pts;
    for (int k = 0; k < 17; ++k) pts.push_back(testing::random_complex(rng, 0.0, 1.0));
    const Measure mu = Measure::discrete(pts);
    Real worst = 0.0;
    for (int t = 0; t < 50; ++t) {
      const Complex z = testing::random_complex(rng, 1.2, 3.0);
      Real mean = 0.0;
      for (const auto& p : pts) mean -= std::log(std::abs(z - p));
      worst = std::max(worst, std::abs(mu.potential(z) - mean / static_cast<Real>(pts.size())));
    }
    prop("superposition", worst <= 1e-12);
  }
  {  // harmonicity probe
    const Measure mu = Measure::uniform_circle(Complex(0.2, 0.1), 1.0);
    Real worst = 0.0;
    for (const Complex c : {Complex(0.1, 0.0), Complex(2.5, 0.3), Complex(-1.0, 2.0)}) {
      Real mean = 0.0;
      for (int k = 0; k < 64; ++k) mean += mu.potential(c + std::polar(0.3, 2.0 * kPi * k / 64.0));
      worst = std::max(worst, std::abs(mean / 64.0 - mu.potential(c)));
    }
    prop("harmonicity", worst <= 1e-6);
  }
  {  // decay at infinity
    bool ok = true;
    for (const auto& mu : {Measure::uniform_circle(Complex(0.5, 0.5), 2.0), Measure::arcsine(-1.0, 3.0),
                           Measure::discrete({1.0, Complex(0.0, 2.0), -1.0})}) {
      ok = ok && std::abs(mu.potential(Complex(1e3, 0.0)) + std::log(1e3)) < 1e-2;
      ok = ok && std::abs(mu.potential(Complex(0.0, 1e6)) + std::log(1e6)) < 1e-5;
    }
    prop("decay at infinity", ok);
  }
  {  // monotone level regions
    const Measure mu = Measure::discrete({Complex(-1.0, 0.0), Complex(1.0, 0.0), Complex(0.0, 1.5)});
    const Box box{-4.0, 4.0, -4.0, 4.0};
    bool ok = true;
    LevelGrid prev = level_grid(LevelRegion(mu, 0.25), box, 120, 120);
    for (const Real r : {0.5, 1.0, 1.5, 2.5, 4.0}) {
      const LevelGrid g = level_grid(LevelRegion(mu, r), box, 120, 120);
      for (int j = 0; j <= 120; ++j)
        for (int i = 0; i <= 120; ++i) ok = ok && (!prev.inside(i, j) || g.inside(i, j));
      prev = g;
    }
    prop("monotone level regions", ok);
  }
  auto& ex = preset_run("montessus-m2");
  {  // Leja order and node residuals
    std::vector<Complex> pts;
    for (int k = 0; k < 30; ++k) pts.push_back(testing::random_complex(rng, 0.0, 2.0));
    prop("Leja order", leja_order(pts) == greedy_leja(pts));
    Real worst = 0.0;
    bool all = ex.sweep.built() == ex.sweep.range.size();
    for (const auto& e : ex.sweep.entries)
      if (e.approx)
        worst = std::max(worst, with_approx(*e.approx, [](const auto& p) { return p.residual / p.residual_scale; }));
    prop("Leja-ordered node residuals", all && worst <= ex.setup.pade.tol_residual);
    out.detail << "node residual " << worst << "; ";
  }
  {  // normalization boundedness: Q_n -> (z - 2)(z - 3), sup 3.5 * 4.5 on |z| = 1.5
    Real top = 0.0;
    for (const auto& e : ex.sweep.entries)
      if (e.approx)
        for (int k = 0; k < 128; ++k) top = std::max(top, q_abs(*e.approx, std::polar(1.5, 2.0 * kPi * k / 128.0)));
    prop("normalization boundedness", top <= 1.1 * 15.75);
    out.detail << "sup |Q| on K " << top << "; ";
  }
  {  // exclusion only lowers sup norms
    bool ok = true;
    for (const auto& row : e3_rates.rows) ok = ok && (!row.built || row.e_n <= row.e_n_full);
    prop("exclusion lowers sup norms", ok);
  }
  {  // nested compacta and the inferred R
    std::vector<RateSeries> series;
    for (const Real radius : {1.2, 1.5, 1.8}) {
      LabSetup s = ex.setup;
      s.K = CompactSet::circle(0.0, radius);
      series.push_back(rate_sequence(s, ex.sweep, 0.01, NRange{24, 44}));
    }
    bool ordered = true;
    for (std::size_t i = 0; i + 1 < series.size(); ++i)
      ordered = ordered && series[i].target <= series[i + 1].target &&
                series[i].tail_geomean <= series[i + 1].tail_geomean + 0.05;
    prop("nested rate ordering", ordered);
    bool within = true;
    out.detail << "inferred R";
    for (const auto& s : series) {
      within = within && s.inferred_R <= kMontessusR * (1.0 + kUpperBoundTolerance);
      out.detail << ' ' << s.inferred_R;
    }
    out.detail << "; ";
    prop("inferred R within 10% of R_m", within);
  }
  {  // scale invariance
    LabSetup scaled = ex.setup;
    scaled.f = scaled.f.scaled(Complex(3.0, -2.0));
    const auto sweep = build_sweep(scaled, ex.cfg.n_range);
    const auto e1 = exactness_subsequence(ex.setup, ex.sweep, 0.05, NRange{24, 44});
    const auto e2 = exactness_subsequence(scaled, sweep, 0.05, NRange{24, 44});
    const LevelRegion D(Measure::uniform_circle(0.0, 1.0), kMontessusR);
    const auto c1 = zero_cluster_scan(e1, ex.sweep, D, 0.5, 256, NRange{20, 48});
    const auto c2 = zero_cluster_scan(e2, sweep, D, 0.5, 256, NRange{20, 48});
    prop("scale invariance of Lambda", e1.lambda == e2.lambda);
    prop("scale invariance of the cluster summary", std::abs(c1.summary - c2.summary) <= 1e-6);
    out.detail << "|Lambda| " << e1.lambda.size() << " vs scaled " << e2.lambda.size() << "; ";
  }
  out.detail << props << " properties";
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<void(Outcome&)>>> items{
      {"E1 classical consistency", e1}, {"E2 rational exactness", e2}, {"E3 rate on the Montessus model", e3},
      {"E4 node distribution", e4},     {"E5 exceptional-set content", e5}, {"E6 zero clusters", e6},
      {"E7 property suites", e7}};
  int failed = 0;
  for (const auto& [name, run] : items) {
    Outcome out;
    try {
      run(out);
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail << " [exception: " << e.what() << "]";
    }
    failed += !out.pass;
    std::printf("%s %s: %s\n", out.pass ? "PASS" : "FAIL", name, out.detail.str().c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
