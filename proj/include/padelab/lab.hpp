#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "padelab/compact_set.hpp"
#include "padelab/errors.hpp"
#include "padelab/function_model.hpp"
#include "padelab/kernels.hpp"
#include "padelab/pade.hpp"
#include "padelab/potential.hpp"
#include "padelab/tables.hpp"

namespace padelab {

// Inclusive range of orders n.
struct NRange {
  int lo = 1;
  int hi = 1;

  int size() const { return hi >= lo ? hi - lo + 1 : 0; }
  bool contains(int n) const { return n >= lo && n <= hi; }
  // Upper half [lo + (hi - lo + 1) / 2, hi].
  NRange upper_half() const { return {lo + (hi - lo + 1) / 2, hi}; }
};

/// Everything an experiment fixes besides the stage parameters.
struct LabSetup {
  TargetFunction f;
  TriangularTable table;
  CompactSet E;
  Measure mu;
  int m = 0;
  CompactSet K;
  GridSpec grid;
  Precision precision = Precision::binary64;
  PadeOptions pade;  // domain is filled in from D_{m,mu}
  kernels::Exec exec = kernels::Exec::parallel;
};

using AnyApproximant = std::variant<PadeApproximant, QuadPadeApproximant>;

// Coefficients and roots rounded to binary64.
template <class R>
PadeApproximant to_binary64(const BasicPadeApproximant<R>& a);
PadeApproximant to_binary64(const AnyApproximant& a);

struct SweepEntry {
  int n = 0;
  std::optional<AnyApproximant> approx;
  std::string error;  // build failure message when approx is empty
  bool ill_conditioned_failure = false;
};

/// Approximants pi_{n,m} for every n of a range; failures are recorded per n.
struct BuildSweep {
  int m = 0;
  NRange range;
  Precision precision = Precision::binary64;
  MeromorphyReport meromorphy;  // R_{m,mu} and the poles of f inside D_{m,mu}
  std::vector<SweepEntry> entries;  // ascending n

  const SweepEntry* find(int n) const;
  int built() const;
};

// D_{m,mu} for the setup's f, mu and m.
LevelRegion meromorphy_region(const LabSetup& setup, const MeromorphyReport& report);

/**
 * Build pi_{n,m} for every n in the range, in parallel over n.
 *
 * Throws NumericalError("all builds failed") when no order succeeds.
 */
BuildSweep build_sweep(const LabSetup& setup, NRange range);

// Omega(eps): union over the built orders n >= 1 of the disks of radius
// eps / (2 m n^2) about the inner poles. Empty when m = 0.
ExceptionalSet sweep_exceptional_set(const BuildSweep& sweep, Real eps);

/**
 * max |g| over the grid points that are not in the exclusion set.
 *
 * Throws NumericalError("exclusion swallowed K") when every point is excluded.
 */
template <class Fn>
Real sup_norm_on_grid(Fn&& g, std::span<const Complex> grid, const ExceptionalSet* exclusions,
                      kernels::Exec exec = kernels::Exec::parallel) {
  std::vector<Complex> kept;
  kept.reserve(grid.size());
  for (const auto& z : grid)
    if (!exclusions || !exclusions->contains(z)) kept.push_back(z);
  if (kept.empty()) throw NumericalError("exclusion swallowed K");
  return kernels::max_abs(kept, std::forward<Fn>(g), exec);
}

struct RateRow {
  int n = 0;
  bool built = false;
  Real e_n = 0.0;  // on K minus Omega(eps)
  Real e_n_full = 0.0;  // on all of K
  Real root_rate = 0.0;  // e_n^{1/n}
  Real pole_error = 0.0;  // max over poles of f in D of the distance to the nearest free pole
  int k_n = 0;
  bool ill_conditioned = false;
  bool degenerate = false;
  std::string error;
};

struct RateSeries {
  Real rho_K = 0.0;  // ||exp(-U)||_K
  Real R_m = kInfinity;
  Real target = 0.0;  // rho_K / R_m
  Real eps = 0.0;
  Real omega_radius_sum = 0.0;
  NRange tail;
  Real tail_geomean = 0.0;  // of root_rate over built tail orders
  Real pole_tail_rate = 0.0;  // geometric mean of pole_error^{1/n} over the tail
  Real inferred_R = kInfinity;  // rho_K / tail_geomean
  bool upper_bound_ok = true;  // inferred_R <= R_m * (1 + upper_bound_tol)
  bool exact = false;  // f is rational of a type the tail orders reproduce
  std::vector<RateRow> rows;
};

inline constexpr Real kUpperBoundTolerance = 0.1;

/**
 * e_n on K minus Omega(eps) for each n, with the target rate and tail statistics.
 *
 * The tail window defaults to the upper half of the range. Requires K inside
 * D_{m,mu} and eps > 0.
 */
RateSeries rate_sequence(const LabSetup& setup, const BuildSweep& sweep, Real eps,
                         std::optional<NRange> tail = std::nullopt);
RateSeries rate_sequence(const LabSetup& setup, Real eps, NRange range,
                         std::optional<NRange> tail = std::nullopt);

struct ExactnessRow {
  int n = 0;
  bool built = false;
  Real h_n = 0.0;
  bool in_lambda = false;
};

struct ExactnessReport {
  Real target = 0.0;
  Real delta = 0.0;
  NRange tail;
  std::vector<ExactnessRow> rows;
  std::vector<int> lambda;  // ascending
  std::optional<Real> density_ratio;  // max n_{k+1}/n_k; empty when |lambda| < 2
  std::optional<Real> tail_density_ratio;  // the same restricted to the tail window
  bool degenerate = false;  // R_m infinite: errors at the floor, lambda empty by convention
  std::string diagnostic;
};

/**
 * h_n = ||F Q_n - Q_f P_n||_K^{1/n} with Q_f the monic polynomial of the poles
 * of f inside D_{m,mu} and F = f Q_f, and Lambda = {n : |h_n - target| <= delta}.
 */
ExactnessReport exactness_subsequence(const LabSetup& setup, const BuildSweep& sweep, Real delta,
                                      std::optional<NRange> tail = std::nullopt);
ExactnessReport exactness_subsequence(const LabSetup& setup, Real delta, NRange range,
                                      std::optional<NRange> tail = std::nullopt);

struct DistributionRow {
  int n = 0;
  Real discrepancy = 0.0;
  int skipped = 0;
};

// Potential discrepancy between the counting measure of row n and mu.
std::vector<DistributionRow> interpolation_distribution_test(const TriangularTable& table,
                                                             const Measure& mu, const CompactSet& E,
                                                             std::span<const int> n_list,
                                                             std::span<const Complex> test_points,
                                                             kernels::Exec exec = kernels::Exec::parallel);

struct ClusterRow {
  int point = 0;  // index into ClusterReport::boundary
  int n = 0;
  Real mass = 0.0;
};

struct ClusterReport {
  Real radius = 0.0;
  NRange tail;
  std::vector<Complex> boundary;  // sampled points z0 on the boundary of D
  std::vector<int> orders;  // the n scanned
  bool no_lambda = false;  // Lambda was empty; all built n in the tail were scanned
  std::vector<ClusterRow> rows;  // (point, n) in point-major order
  std::vector<Real> point_max;  // per z0: max mass over the scanned n
  Real summary = 0.0;  // max of point_max
};

// Mass of the counting measure of each zero list in the closed disk (z0, r),
// for every (z0, list) pair, point-major.
std::vector<Real> cluster_masses(std::span<const Complex> centers, Real r,
                                 const std::vector<std::vector<Complex>>& zero_lists,
                                 kernels::Exec exec = kernels::Exec::parallel);

/**
 * Counting-measure mass of the free zeros of P_n in disks of radius r about
 * boundary_samples points of the boundary of D, for n in Lambda within the tail
 * window (all built n in the window, tagged no_lambda, when Lambda misses it).
 */
ClusterReport zero_cluster_scan(const ExactnessReport& exactness, const BuildSweep& sweep,
                                const LevelRegion& D, Real r, int boundary_samples,
                                std::optional<NRange> tail = std::nullopt, int grid_cells = 400,
                                kernels::Exec exec = kernels::Exec::parallel);
// Same scan over an explicit list of boundary points.
ClusterReport zero_cluster_scan(const ExactnessReport& exactness, const BuildSweep& sweep,
                                std::vector<Complex> boundary, Real r,
                                std::optional<NRange> tail = std::nullopt,
                                kernels::Exec exec = kernels::Exec::parallel);

}  // namespace padelab
