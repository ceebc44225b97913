#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "padelab/function_model.hpp"
#include "padelab/polynomial.hpp"
#include "padelab/potential.hpp"
#include "padelab/tables.hpp"

namespace padelab {

// Taylor coefficients g_0..g_order of some function g at z.
using TaylorOracle = std::function<std::vector<Complex>(Complex z, int order)>;

// Two nodes are the same node when closer than this (relative).
inline constexpr Real kNodeMergeTol = 1e-14;

/**
 * Leja ordering of a node list with repeats kept adjacent.
 *
 * Distinct values are ordered greedily: start at the largest modulus, then
 * always take the value maximizing the product of distances to those
 * already chosen. Each value is emitted as many times as it occurs.
 */
std::vector<Complex> leja_order(std::span<const Complex> nodes);

// Groups nodes equal within kNodeMergeTol so repeats are adjacent, keeping
// first-occurrence order otherwise.
std::vector<Complex> group_repeats(std::span<const Complex> nodes);

// Newton coefficients g[x_0], g[x_0,x_1], ..., g[x_0..x_{N-1}].
// A block of k+1 equal nodes x contributes g^(k)(x)/k!.
std::vector<Complex> newton_coefficients(const TaylorOracle& g, std::span<const Complex> nodes);
// g[x_0..x_{N-1}] alone.
Complex divided_difference(const TaylorOracle& g, std::span<const Complex> nodes);

struct PadeOptions {
  Real tol_gcd = 1e-8;
  // Node residual |fQ - P| allowed, relative to max|f| * max(1, max|Q|) over the nodes.
  Real tol_residual = 1e-8;
  // Singular values below rank_tol * sigma_max count as null directions.
  // Both thresholds are stated for binary64 and scaled by the ratio of
  // machine epsilons when building in another precision.
  Real rank_tol = 1e-10;
  // Condition estimates above this set ill_conditioned.
  Real ill_condition = 1e12;
  bool leja = true;
  // Region used for the denominator normalization; all zeros are treated as
  // inside (monic Q) when absent.
  std::optional<LevelRegion> domain;
};

/// The multipoint Pade approximant P/Q of order (n, m) with diagnostics.
template <class R>
struct BasicPadeApproximant {
  using C = std::complex<R>;

  int n = 0;
  int m = 0;
  BasicPolynomial<R> P;
  BasicPolynomial<R> Q;  // normalized: monic factors inside the domain, (1 - z/a) outside
  BasicRootSet<R> free_zeros;  // zeros of P
  BasicRootSet<R> free_poles;  // zeros of Q
  std::vector<C> inner_poles;  // zeros of Q inside the domain, with multiplicity
  int k_n = 0;  // inner_poles.size()
  bool degenerate = false;  // null space of the linear conditions larger than one
  int null_dimension = 1;
  int cancelled = 0;  // common root pairs removed
  Real residual = 0.0;  // max node residual, including derivatives at repeated nodes
  Real residual_scale = 1.0;
  Real condition = 1.0;  // sigma_max / smallest retained singular value
  bool ill_conditioned = false;
  std::vector<Complex> nodes;  // in the order used

  C operator()(C z) const { return P(z) / Q(z); }
};

using PadeApproximant = BasicPadeApproximant<Real>;
using QuadPadeApproximant = BasicPadeApproximant<Quad>;

/**
 * Build the approximant on the first n+m+1 entries of an explicit node list.
 *
 * The conditions that the Newton coefficients of f q of orders n+1..n+m
 * vanish form an m x (m+1) system for the coefficients of q; its smallest
 * right singular vector gives q, and P is the Newton interpolant of f q
 * through orders 0..n. Common roots are cancelled and Q normalized.
 * Everything from the Taylor data on is computed in R.
 *
 * Throws IllConditionedBuild when the node residual exceeds tol_residual.
 */
template <class R = Real>
BasicPadeApproximant<R> build_pade_on_nodes(const TargetFunction& f, std::span<const Complex> nodes,
                                            int n, int m, const PadeOptions& opts = {});

// Uses row n+m+1 of the table.
template <class R = Real>
BasicPadeApproximant<R> build_pade(const TargetFunction& f, const TriangularTable& table, int n, int m,
                                   const PadeOptions& opts = {}) {
  const auto row = table.row(n + m + 1);
  return build_pade_on_nodes<R>(f, row, n, m, opts);
}

template <class R>
struct BasicNormalizedDenominator {
  BasicPolynomial<R> Q;
  std::complex<R> factor;  // Q = factor * q_raw
  std::vector<std::complex<R>> inside;
  std::vector<std::complex<R>> outside;
};

using NormalizedDenominator = BasicNormalizedDenominator<Real>;

/**
 * Rescale q so that Q = prod (z - a') prod (1 - z/a''), a' the zeros in D
 * (boundary zeros count as inside), a'' the rest.
 *
 * Throws NumericalError("normalization singular") when a zero at the origin
 * falls outside D.
 */
template <class R>
BasicNormalizedDenominator<R> normalize_denominator_detailed(const BasicPolynomial<R>& q_raw,
                                                             std::span<const std::complex<R>> roots,
                                                             const std::optional<LevelRegion>& D);
Polynomial normalize_denominator(const Polynomial& q_raw, const std::optional<LevelRegion>& D);

struct ExclusionDisk {
  Complex center;
  Real radius;
};

/// Union of small disks around the inner poles, one family per order n.
struct ExceptionalSet {
  Real epsilon = 0.0;
  std::vector<ExclusionDisk> disks;

  Real radius_sum() const;
  bool contains(Complex z) const;
  void merge(const ExceptionalSet& other);
};

// One disk of radius eps / (2 m n^2) per inner pole.
template <class R>
ExceptionalSet exceptional_set(const BasicPadeApproximant<R>& approx, Real eps);

}  // namespace padelab
