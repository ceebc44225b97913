#include "padelab/pade.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/multiprecision/eigen.hpp>
#include <Eigen/SVD>

#include "padelab/errors.hpp"

namespace padelab {

namespace {

bool same_node(Complex a, Complex b) {
  return std::abs(a - b) <= kNodeMergeTol * std::max(1.0, std::abs(a));
}

struct NodeGroup {
  Complex value;
  int count;
};

std::vector<NodeGroup> distinct_groups(std::span<const Complex> nodes) {
  std::vector<NodeGroup> groups;
  for (const auto& z : nodes) {
    auto it = std::find_if(groups.begin(), groups.end(), [&](const NodeGroup& g) { return same_node(g.value, z); });
    if (it == groups.end())
      groups.push_back({z, 1});
    else
      ++it->count;
  }
  return groups;
}

std::vector<Complex> expand(const std::vector<NodeGroup>& groups) {
  std::vector<Complex> out;
  for (const auto& g : groups)
    for (int k = 0; k < g.count; ++k) out.push_back(g.value);
  return out;
}

// Confluent divided-difference table over nodes whose repeats are adjacent
// and bitwise equal. taylor[p] holds at least (block size) coefficients of g
// at nodes[p].
template <class R>
std::vector<std::complex<R>> newton_from_taylor(std::span<const Complex> nodes,
                                                const std::vector<std::vector<std::complex<R>>>& taylor) {
  const std::size_t n = nodes.size();
  std::vector<std::complex<R>> t(n), d(n);
  for (std::size_t i = 0; i < n; ++i) t[i] = taylor[i][0];
  if (n == 0) return d;
  d[0] = t[0];
  for (std::size_t j = 1; j < n; ++j) {
    for (std::size_t i = n - 1; i >= j; --i) {
      if (nodes[i] == nodes[i - j])
        t[i] = taylor[i][j];
      else
        t[i] = (t[i] - t[i - 1]) / (widen<R>(nodes[i]) - widen<R>(nodes[i - j]));
      if (i == j) break;
    }
    d[j] = t[j];
  }
  return d;
}

// Block size of the run of equal nodes containing each position.
std::vector<int> block_sizes(std::span<const Complex> nodes) {
  std::vector<int> sizes(nodes.size(), 1);
  std::size_t start = 0;
  for (std::size_t i = 1; i <= nodes.size(); ++i) {
    if (i == nodes.size() || nodes[i] != nodes[start]) {
      for (std::size_t k = start; k < i; ++k) sizes[k] = static_cast<int>(i - start);
      start = i;
    }
  }
  return sizes;
}

// Taylor coefficients of z^power at x, orders 0..order.
template <class R>
std::vector<std::complex<R>> monomial_taylor(int power, std::complex<R> x, int order) {
  using C = std::complex<R>;
  std::vector<C> c(static_cast<std::size_t>(order) + 1, C(0));
  R binom(1);
  for (int l = 0; l <= std::min(order, power); ++l) {
    C xp(1);
    for (int k = 0; k < power - l; ++k) xp *= x;
    c[static_cast<std::size_t>(l)] = C(binom) * xp;
    binom = binom * (power - l) / (l + 1);
  }
  return c;
}

template <class C>
std::vector<C> convolve(const std::vector<C>& a, const std::vector<C>& b, std::size_t length) {
  std::vector<C> c(length, C(0));
  for (std::size_t i = 0; i < std::min(a.size(), length); ++i)
    for (std::size_t j = 0; i + j < length && j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return c;
}

template <class R>
using VectorC = Eigen::Matrix<std::complex<R>, Eigen::Dynamic, 1>;
template <class R>
using MatrixC = Eigen::Matrix<std::complex<R>, Eigen::Dynamic, Eigen::Dynamic>;

// Unit vector with its first significant coefficient real and positive.
template <class R>
VectorC<R> canonical_phase(VectorC<R> c) {
  c /= std::complex<R>(c.norm());
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    if (std::abs(c(i)) > R(1e-12)) {
      c *= std::conj(c(i)) / std::complex<R>(std::abs(c(i)));
      break;
    }
  }
  return c;
}

}  // namespace

std::vector<Complex> group_repeats(std::span<const Complex> nodes) {
  return expand(distinct_groups(nodes));
}

std::vector<Complex> leja_order(std::span<const Complex> nodes) {
  auto groups = distinct_groups(nodes);
  if (groups.size() <= 1) return expand(groups);
  std::vector<NodeGroup> ordered;
  std::vector<bool> used(groups.size(), false);

  auto better = [&](std::size_t a, std::size_t b, Real sa, Real sb) {
    if (sa != sb) return sa > sb;
    return lex_less(groups[a].value, groups[b].value);
  };
  std::size_t first = 0;
  for (std::size_t i = 1; i < groups.size(); ++i)
    if (better(i, first, std::abs(groups[i].value), std::abs(groups[first].value))) first = i;
  used[first] = true;
  ordered.push_back(groups[first]);

  std::vector<Real> score(groups.size(), 0.0);
  for (std::size_t step = 1; step < groups.size(); ++step) {
    const Complex last = ordered.back().value;
    std::size_t pick = groups.size();
    for (std::size_t i = 0; i < groups.size(); ++i) {
      if (used[i]) continue;
      score[i] += std::log(std::abs(groups[i].value - last));
      if (pick == groups.size() || better(i, pick, score[i], score[pick])) pick = i;
    }
    used[pick] = true;
    ordered.push_back(groups[pick]);
  }
  return expand(ordered);
}

std::vector<Complex> newton_coefficients(const TaylorOracle& g, std::span<const Complex> nodes) {
  const auto ordered = group_repeats(nodes);
  const auto sizes = block_sizes(ordered);
  std::vector<std::vector<Complex>> taylor(ordered.size());
  for (std::size_t p = 0; p < ordered.size(); ++p) {
    if (p > 0 && ordered[p] == ordered[p - 1])
      taylor[p] = taylor[p - 1];
    else
      taylor[p] = g(ordered[p], sizes[p] - 1);
  }
  return newton_from_taylor<Real>(ordered, taylor);
}

Complex divided_difference(const TaylorOracle& g, std::span<const Complex> nodes) {
  if (nodes.empty()) throw ConfigError("divided_difference: empty node list");
  return newton_coefficients(g, nodes).back();
}

template <class R>
BasicNormalizedDenominator<R> normalize_denominator_detailed(const BasicPolynomial<R>& q_raw,
                                                             std::span<const std::complex<R>> roots,
                                                             const std::optional<LevelRegion>& D) {
  using C = std::complex<R>;
  if (q_raw.is_zero()) throw NumericalError("normalization singular: zero denominator");
  BasicNormalizedDenominator<R> out;
  C factor = C(1) / q_raw.leading();
  for (const auto& r : roots) {
    if (!D || D->contains_or_on_boundary(narrow(r))) {
      out.inside.push_back(r);
    } else {
      if (r == C(0)) throw NumericalError("normalization singular: zero root outside the domain");
      out.outside.push_back(r);
      factor *= C(-1) / r;
    }
  }
  out.factor = factor;
  out.Q = q_raw * factor;
  return out;
}

Polynomial normalize_denominator(const Polynomial& q_raw, const std::optional<LevelRegion>& D) {
  const auto roots = q_raw.degree() >= 1 ? poly_roots_raw(q_raw) : std::vector<Complex>{};
  return normalize_denominator_detailed(q_raw, std::span<const Complex>(roots), D).Q;
}

template <class R>
BasicPadeApproximant<R> build_pade_on_nodes(const TargetFunction& f, std::span<const Complex> nodes,
                                            int n, int m, const PadeOptions& opts) {
  using C = std::complex<R>;
  if (n < 0 || m < 0) throw ConfigError("build_pade: n and m must be non-negative");
  const auto N = static_cast<std::size_t>(n + m + 1);
  if (nodes.size() < N)
    throw ConfigError("build_pade: order (" + std::to_string(n) + "," + std::to_string(m) + ") needs " +
                      std::to_string(N) + " nodes");
  const auto used = nodes.subspan(0, N);

  BasicPadeApproximant<R> out;
  out.n = n;
  out.m = m;
  out.nodes = opts.leja ? leja_order(used) : group_repeats(used);
  const auto& x = out.nodes;
  const auto sizes = block_sizes(x);

  // Taylor data of f at every node position (shared within a block).
  std::vector<std::vector<C>> ft(N);
  for (std::size_t p = 0; p < N; ++p)
    ft[p] = (p > 0 && x[p] == x[p - 1]) ? ft[p - 1] : f.taylor_as<R>(widen<R>(x[p]), sizes[p] - 1);

  // Newton coefficients of f z^i for i = 0..m.
  std::vector<std::vector<C>> dd(static_cast<std::size_t>(m) + 1);
  for (int i = 0; i <= m; ++i) {
    std::vector<std::vector<C>> gt(N);
    for (std::size_t p = 0; p < N; ++p) {
      if (p > 0 && x[p] == x[p - 1]) {
        gt[p] = gt[p - 1];
        continue;
      }
      const int order = sizes[p] - 1;
      gt[p] = convolve(ft[p], monomial_taylor(i, widen<R>(x[p]), order), static_cast<std::size_t>(order) + 1);
    }
    dd[static_cast<std::size_t>(i)] = newton_from_taylor<R>(x, gt);
  }

  const Real eps_ratio = narrow(R(std::numeric_limits<R>::epsilon())) / std::numeric_limits<Real>::epsilon();
  const Real rank_tol = opts.rank_tol * eps_ratio;
  const Real ill_condition = opts.ill_condition / eps_ratio;

  // Null direction of the m x (m+1) system.
  VectorC<R> c = VectorC<R>::Zero(m + 1);
  if (m == 0) {
    c(0) = C(1);
  } else {
    MatrixC<R> A(m, m + 1);
    for (int k = 0; k < m; ++k)
      for (int i = 0; i <= m; ++i) A(k, i) = dd[static_cast<std::size_t>(i)][static_cast<std::size_t>(n + 1 + k)];
    for (int k = 0; k < m; ++k) {
      const R r = A.row(k).norm();
      if (r > 0) A.row(k) /= C(r);
    }
    VectorC<R> col_scale(m + 1);
    for (int i = 0; i <= m; ++i) {
      const R s = A.col(i).norm();
      col_scale(i) = C(s > 0 ? R(1) / s : R(1));
      A.col(i) *= col_scale(i);
    }
    Eigen::JacobiSVD<MatrixC<R>> svd(A, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    int rank = 0;
    for (Eigen::Index k = 0; k < sv.size(); ++k)
      if (sv(k) > R(rank_tol) * sv(0)) ++rank;
    out.null_dimension = m + 1 - rank;
    out.condition = rank > 0 ? narrow(R(sv(0) / sv(rank - 1))) : 1.0;

    const MatrixC<R> basis = col_scale.asDiagonal() * svd.matrixV().rightCols(out.null_dimension);
    if (out.null_dimension == 1) {
      c = basis.col(0);
    } else {
      // Lowest-degree member of the null space: annihilate the top
      // null_dimension - 1 coefficients.
      out.degenerate = true;
      const int d = out.null_dimension;
      const MatrixC<R> top = basis.bottomRows(d - 1);
      Eigen::JacobiSVD<MatrixC<R>> small(top, Eigen::ComputeFullV);
      c = basis * small.matrixV().col(d - 1);
      // Zero by construction; drop the rounding so no spurious huge root appears.
      c.tail(d - 1).setZero();
    }
    c = canonical_phase<R>(c);
  }

  // Newton coefficients of f q, truncated to orders 0..n.
  std::vector<C> g(static_cast<std::size_t>(n) + 1, C(0));
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= m; ++i) g[static_cast<std::size_t>(j)] += c(i) * dd[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  BasicPolynomial<R> p_raw = BasicPolynomial<R>::constant(g[static_cast<std::size_t>(n)]);
  for (int j = n - 1; j >= 0; --j) {
    p_raw = p_raw * BasicPolynomial<R>{-widen<R>(x[static_cast<std::size_t>(j)]), C(1)};
    p_raw += BasicPolynomial<R>::constant(g[static_cast<std::size_t>(j)]);
  }
  const BasicPolynomial<R> q_raw(std::vector<C>(c.data(), c.data() + c.size()));

  auto reduced = remove_common_factors_detailed(p_raw, q_raw, opts.tol_gcd);
  out.cancelled = reduced.cancelled;
  const auto norm = normalize_denominator_detailed(reduced.q, std::span<const C>(reduced.q_roots), opts.domain);
  out.Q = norm.Q;
  out.P = reduced.p * norm.factor;
  out.inner_poles = norm.inside;
  out.k_n = static_cast<int>(norm.inside.size());
  out.free_zeros = cluster_roots(reduced.p_roots, RootOptions{}.cluster_tol);
  out.free_poles = cluster_roots(reduced.q_roots, RootOptions{}.cluster_tol);
  out.ill_conditioned = out.condition > ill_condition;

  // Interpolation residual, with derivative conditions at repeated nodes.
  R residual(0), f_scale(0), q_scale(1);
  for (std::size_t p = 0; p < N; ++p) {
    if (p > 0 && x[p] == x[p - 1]) continue;
    const auto k = static_cast<std::size_t>(sizes[p]);
    const auto qs = out.Q.shifted(widen<R>(x[p]));
    const auto ps = out.P.shifted(widen<R>(x[p]));
    std::vector<C> qt(k);
    for (std::size_t l = 0; l < k; ++l) qt[l] = qs[static_cast<int>(l)];
    const auto fq = convolve(ft[p], qt, k);
    for (std::size_t l = 0; l < k; ++l) {
      residual = std::max(residual, R(std::abs(fq[l] - ps[static_cast<int>(l)])));
      f_scale = std::max(f_scale, R(std::abs(ft[p][l])));
      q_scale = std::max(q_scale, R(std::abs(qt[l])));
    }
  }
  out.residual = narrow(residual);
  out.residual_scale = std::max(narrow(f_scale), 1e-300) * narrow(q_scale);
  if (!(out.residual <= opts.tol_residual * out.residual_scale)) {
    std::ostringstream msg;
    msg << "ill-conditioned build: order (" << n << "," << m << ") node residual " << out.residual
        << " exceeds " << opts.tol_residual << " x scale " << out.residual_scale << ", condition estimate "
        << out.condition;
    throw IllConditionedBuild(msg.str(), out.condition, out.residual);
  }
  return out;
}

Real ExceptionalSet::radius_sum() const {
  Real s = 0.0;
  for (const auto& d : disks) s += d.radius;
  return s;
}

bool ExceptionalSet::contains(Complex z) const {
  return std::any_of(disks.begin(), disks.end(),
                     [&](const ExclusionDisk& d) { return std::abs(z - d.center) < d.radius; });
}

void ExceptionalSet::merge(const ExceptionalSet& other) {
  epsilon = std::max(epsilon, other.epsilon);
  disks.insert(disks.end(), other.disks.begin(), other.disks.end());
}

template <class R>
ExceptionalSet exceptional_set(const BasicPadeApproximant<R>& approx, Real eps) {
  if (!(eps > 0.0)) throw ConfigError("exceptional_set: eps must be positive");
  if (approx.m < 1) throw ConfigError("exceptional_set: m must be at least 1");
  if (approx.n < 1) throw ConfigError("exceptional_set: n must be at least 1");
  ExceptionalSet out;
  out.epsilon = eps;
  const Real radius = eps / (2.0 * approx.m * static_cast<Real>(approx.n) * approx.n);
  for (const auto& a : approx.inner_poles) out.disks.push_back({narrow(a), radius});
  return out;
}

#define PADELAB_INSTANTIATE(R)                                                                        \
  template BasicPadeApproximant<R> build_pade_on_nodes<R>(const TargetFunction&, std::span<const Complex>, \
                                                          int, int, const PadeOptions&);              \
  template BasicNormalizedDenominator<R> normalize_denominator_detailed(                              \
      const BasicPolynomial<R>&, std::span<const std::complex<R>>, const std::optional<LevelRegion>&); \
  template ExceptionalSet exceptional_set(const BasicPadeApproximant<R>&, Real);

PADELAB_INSTANTIATE(Real)
PADELAB_INSTANTIATE(Quad)
#undef PADELAB_INSTANTIATE

}  // namespace padelab
