#include "padelab/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <boost/multiprecision/eigen.hpp>
#include <Eigen/Eigenvalues>

#include "padelab/errors.hpp"

namespace padelab {

template <class R>
BasicPolynomial<R>::BasicPolynomial(std::vector<C> coefficients) : coeffs_(std::move(coefficients)) {
  trim();
}

template <class R>
BasicPolynomial<R>::BasicPolynomial(std::initializer_list<C> coefficients) : coeffs_(coefficients) {
  trim();
}

template <class R>
BasicPolynomial<R> BasicPolynomial<R>::constant(C c) {
  return BasicPolynomial(std::vector<C>{c});
}

template <class R>
BasicPolynomial<R> BasicPolynomial<R>::monomial(int k, C c) {
  std::vector<C> v(static_cast<std::size_t>(k) + 1, C(0));
  v.back() = c;
  return BasicPolynomial(std::move(v));
}

template <class R>
void BasicPolynomial<R>::trim() {
  while (!coeffs_.empty() && coeffs_.back() == C(0)) coeffs_.pop_back();
}

template <class R>
auto BasicPolynomial<R>::operator[](int k) const -> C {
  if (k < 0 || k >= static_cast<int>(coeffs_.size())) return C(0);
  return coeffs_[static_cast<std::size_t>(k)];
}

template <class R>
auto BasicPolynomial<R>::leading() const -> C {
  return coeffs_.empty() ? C(0) : coeffs_.back();
}

template <class R>
auto BasicPolynomial<R>::operator()(C z) const -> C {
  C acc(0);
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

template <class R>
R BasicPolynomial<R>::scale() const {
  R s(0);
  for (const auto& c : coeffs_) s = std::max(s, R(std::abs(c)));
  return s;
}

template <class R>
R BasicPolynomial<R>::abs_bound(C z) const {
  const R r = std::abs(z);
  R acc(0);
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * r + std::abs(*it);
  return acc;
}

template <class R>
BasicPolynomial<R> BasicPolynomial<R>::derivative() const {
  if (coeffs_.size() <= 1) return {};
  std::vector<C> d(coeffs_.size() - 1);
  for (std::size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = coeffs_[k] * R(static_cast<int>(k));
  return BasicPolynomial(std::move(d));
}

template <class R>
BasicPolynomial<R> BasicPolynomial<R>::shifted(C z0) const {
  // Repeated synthetic division by (z - z0).
  std::vector<C> a = coeffs_;
  const std::size_t n = a.size();
  for (std::size_t k = 0; k + 1 < n; ++k) {
    for (std::size_t j = n - 1; j > k; --j) a[j - 1] += z0 * a[j];
  }
  return BasicPolynomial(std::move(a));
}

template <class R>
BasicPolynomial<R> BasicPolynomial<R>::deflated(C root) const {
  if (coeffs_.size() <= 1) return {};
  const std::size_t n = coeffs_.size() - 1;
  std::vector<C> b(n);
  b[n - 1] = coeffs_[n];
  for (std::size_t k = n - 1; k > 0; --k) b[k - 1] = coeffs_[k] + root * b[k];
  return BasicPolynomial(std::move(b));
}

template <class R>
BasicPolynomial<R>& BasicPolynomial<R>::operator+=(const BasicPolynomial& other) {
  if (other.coeffs_.size() > coeffs_.size()) coeffs_.resize(other.coeffs_.size(), C(0));
  for (std::size_t k = 0; k < other.coeffs_.size(); ++k) coeffs_[k] += other.coeffs_[k];
  trim();
  return *this;
}

template <class R>
BasicPolynomial<R>& BasicPolynomial<R>::operator-=(const BasicPolynomial& other) {
  if (other.coeffs_.size() > coeffs_.size()) coeffs_.resize(other.coeffs_.size(), C(0));
  for (std::size_t k = 0; k < other.coeffs_.size(); ++k) coeffs_[k] -= other.coeffs_[k];
  trim();
  return *this;
}

template <class R>
BasicPolynomial<R>& BasicPolynomial<R>::operator*=(C s) {
  for (auto& c : coeffs_) c *= s;
  trim();
  return *this;
}

template <class R>
BasicPolynomial<R> BasicPolynomial<R>::times(const BasicPolynomial& b) const {
  if (is_zero() || b.is_zero()) return {};
  std::vector<C> c(coeffs_.size() + b.coeffs_.size() - 1, C(0));
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += coeffs_[i] * b.coeffs_[j];
  return BasicPolynomial(std::move(c));
}

template <class R>
int BasicRootSet<R>::total_multiplicity() const {
  return std::accumulate(roots_.begin(), roots_.end(), 0,
                         [](int acc, const BasicRoot<R>& r) { return acc + r.multiplicity; });
}

template <class R>
auto BasicRootSet<R>::expanded() const -> std::vector<C> {
  std::vector<C> out;
  for (const auto& r : roots_)
    for (int k = 0; k < r.multiplicity; ++k) out.push_back(r.value);
  return out;
}

namespace {

template <class R>
R relative_distance(const std::complex<R>& a, const std::complex<R>& b) {
  return std::abs(a - b) / std::max({R(1), R(std::abs(a)), R(std::abs(b))});
}

template <class R>
std::complex<R> newton_polish(const BasicPolynomial<R>& p, const BasicPolynomial<R>& dp,
                              std::complex<R> r, int steps) {
  R best = std::abs(p(r));
  for (int s = 0; s < steps && best > 0; ++s) {
    const std::complex<R> d = dp(r);
    if (d == std::complex<R>(0)) break;
    const std::complex<R> next = r - p(r) / d;
    const R res = std::abs(p(next));
    if (!(res < best)) break;
    r = next;
    best = res;
  }
  return r;
}

template <class R>
struct LexLess {
  bool operator()(const std::complex<R>& a, const std::complex<R>& b) const { return lex_less(a, b); }
};

}  // namespace

template <class R>
std::vector<std::complex<R>> poly_roots_raw(const BasicPolynomial<R>& p, const RootOptions& opts) {
  using C = std::complex<R>;
  using std::pow;
  if (p.is_zero()) throw NumericalError("undefined roots: zero polynomial");
  std::vector<C> roots;
  const auto c = p.coefficients();
  std::size_t low = 0;
  while (low < c.size() && c[low] == C(0)) ++low;
  roots.assign(low, C(0));
  const int n = p.degree() - static_cast<int>(low);
  if (n <= 0) return roots;

  const C lead = c.back();
  if (n == 1) {
    roots.push_back(-c[low] / lead);
    return roots;
  }

  // Balance the end coefficients: substitute z = s w.
  const R s = pow(R(std::abs(c[low]) / std::abs(lead)), R(1) / n);
  using Matrix = Eigen::Matrix<C, Eigen::Dynamic, Eigen::Dynamic>;
  Matrix companion = Matrix::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    companion(k, n - 1) = -(c[low + static_cast<std::size_t>(k)] / lead) * C(pow(s, R(k - n)));
    if (k + 1 < n) companion(k + 1, k) = C(1);
  }
  Eigen::ComplexEigenSolver<Matrix> solver(companion, false);
  if (solver.info() != Eigen::Success)
    throw RootFindingError("root finding did not converge: companion eigen solver failed (degree " +
                               std::to_string(p.degree()) + ")",
                           0, kInfinity);

  const BasicPolynomial<R> dp = p.derivative();
  Real worst = 0.0;
  for (int k = 0; k < n; ++k) {
    C r = newton_polish(p, dp, C(s) * solver.eigenvalues()(k), opts.polish_steps);
    const R bound = p.abs_bound(r);
    const Real res = bound > 0 ? narrow(R(std::abs(p(r)) / bound)) : 0.0;
    worst = std::max(worst, res);
    roots.push_back(r);
  }
  if (!(worst <= opts.tol))
    throw RootFindingError("root finding did not converge: relative residual " +
                               std::to_string(worst) + " exceeds tolerance after " +
                               std::to_string(opts.polish_steps) + " Newton steps",
                           opts.polish_steps, worst);
  return roots;
}

template <class R>
BasicRootSet<R> cluster_roots(std::vector<std::complex<R>> roots, Real cluster_tol) {
  using C = std::complex<R>;
  std::sort(roots.begin(), roots.end(), LexLess<R>{});
  const std::size_t n = roots.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (relative_distance(roots[i], roots[j]) <= R(cluster_tol)) parent[find(j)] = find(i);

  std::vector<BasicRoot<R>> out;
  std::vector<bool> done(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = find(i);
    if (done[r]) continue;
    done[r] = true;
    C sum(0);
    int count = 0;
    for (std::size_t j = 0; j < n; ++j)
      if (find(j) == r) {
        sum += roots[j];
        ++count;
      }
    out.push_back({sum / C(R(count)), count});
  }
  std::sort(out.begin(), out.end(),
            [](const BasicRoot<R>& a, const BasicRoot<R>& b) { return lex_less(a.value, b.value); });
  return BasicRootSet<R>(std::move(out));
}

template <class R>
BasicRootSet<R> poly_roots(const BasicPolynomial<R>& p, const RootOptions& opts) {
  return cluster_roots(poly_roots_raw(p, opts), opts.cluster_tol);
}

template <class R>
BasicPolynomial<R> poly_from_roots(std::span<const std::complex<R>> roots, std::complex<R> leading) {
  std::vector<std::complex<R>> c{leading};
  for (const auto& r : roots) {
    c.push_back(std::complex<R>(0));
    for (std::size_t k = c.size() - 1; k > 0; --k) c[k] = c[k - 1] - r * c[k];
    c[0] = -r * c[0];
  }
  return BasicPolynomial<R>(std::move(c));
}

template <class R>
BasicCommonFactorResult<R> remove_common_factors_detailed(const BasicPolynomial<R>& p,
                                                          const BasicPolynomial<R>& q, Real tol_gcd) {
  using C = std::complex<R>;
  BasicCommonFactorResult<R> out;
  if (p.is_zero()) {
    out.q = BasicPolynomial<R>::constant(C(1));
    return out;
  }
  out.p_roots = p.degree() >= 1 ? poly_roots_raw(p) : std::vector<C>{};
  out.q_roots = q.degree() >= 1 ? poly_roots_raw(q) : std::vector<C>{};
  std::sort(out.p_roots.begin(), out.p_roots.end(), LexLess<R>{});
  std::sort(out.q_roots.begin(), out.q_roots.end(), LexLess<R>{});

  struct Pair {
    R d;
    std::size_t i, j;
  };
  std::vector<Pair> pairs;
  for (std::size_t i = 0; i < out.p_roots.size(); ++i)
    for (std::size_t j = 0; j < out.q_roots.size(); ++j) {
      const R d = relative_distance(out.p_roots[i], out.q_roots[j]);
      if (d <= R(tol_gcd)) pairs.push_back({d, i, j});
    }
  // Roots are already lexicographically sorted, so index order is the tie-break.
  std::stable_sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
    if (a.d != b.d) return a.d < b.d;
    if (a.i != b.i) return a.i < b.i;
    return a.j < b.j;
  });

  std::vector<bool> used_p(out.p_roots.size(), false), used_q(out.q_roots.size(), false);
  std::vector<C> drop_p, drop_q;
  for (const auto& pr : pairs) {
    if (used_p[pr.i] || used_q[pr.j]) continue;
    used_p[pr.i] = used_q[pr.j] = true;
    drop_p.push_back(out.p_roots[pr.i]);
    drop_q.push_back(out.q_roots[pr.j]);
  }
  out.cancelled = static_cast<int>(drop_p.size());
  out.p = p;
  out.q = q;
  if (out.cancelled == 0) return out;

  auto by_modulus = [](const C& a, const C& b) {
    if (std::abs(a) != std::abs(b)) return std::abs(a) < std::abs(b);
    return lex_less(a, b);
  };
  std::sort(drop_p.begin(), drop_p.end(), by_modulus);
  std::sort(drop_q.begin(), drop_q.end(), by_modulus);
  for (const auto& r : drop_p) out.p = out.p.deflated(r);
  for (const auto& r : drop_q) out.q = out.q.deflated(r);

  auto keep = [](const std::vector<C>& all, const std::vector<bool>& used) {
    std::vector<C> v;
    for (std::size_t i = 0; i < all.size(); ++i)
      if (!used[i]) v.push_back(all[i]);
    return v;
  };
  out.p_roots = keep(out.p_roots, used_p);
  out.q_roots = keep(out.q_roots, used_q);
  return out;
}

#define PADELAB_INSTANTIATE(R)                                                                    \
  template class BasicPolynomial<R>;                                                              \
  template class BasicRootSet<R>;                                                                 \
  template std::vector<std::complex<R>> poly_roots_raw(const BasicPolynomial<R>&, const RootOptions&); \
  template BasicRootSet<R> poly_roots(const BasicPolynomial<R>&, const RootOptions&);             \
  template BasicRootSet<R> cluster_roots(std::vector<std::complex<R>>, Real);                     \
  template BasicPolynomial<R> poly_from_roots(std::span<const std::complex<R>>, std::complex<R>); \
  template BasicCommonFactorResult<R> remove_common_factors_detailed(                             \
      const BasicPolynomial<R>&, const BasicPolynomial<R>&, Real);

PADELAB_INSTANTIATE(Real)
PADELAB_INSTANTIATE(Quad)
#undef PADELAB_INSTANTIATE

std::string_view to_string(Precision p) { return p == Precision::quad ? "quad" : "binary64"; }

Precision parse_precision(std::string_view name) {
  if (name == "binary64") return Precision::binary64;
  if (name == "quad") return Precision::quad;
  throw ConfigError("unknown precision '" + std::string(name) + "' (expected binary64 or quad)");
}

}  // namespace padelab
