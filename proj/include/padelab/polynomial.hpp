#pragma once

#include <span>
#include <utility>
#include <vector>

#include "padelab/scalar.hpp"

namespace padelab {

/**
 * Complex-coefficient polynomial stored in ascending degree order.
 *
 * The coefficient vector is kept trimmed: the leading coefficient is
 * nonzero unless the polynomial is identically zero, in which case the
 * vector is empty and degree() returns -1.
 */
template <class R>
class BasicPolynomial {
 public:
  using C = std::complex<R>;

  BasicPolynomial() = default;
  explicit BasicPolynomial(std::vector<C> coefficients);
  BasicPolynomial(std::initializer_list<C> coefficients);

  static BasicPolynomial constant(C c);
  static BasicPolynomial monomial(int k, C c = C(1));

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  std::span<const C> coefficients() const { return coeffs_; }

  // Coefficient of z^k; zero beyond the degree.
  C operator[](int k) const;
  C leading() const;

  // Horner evaluation.
  C operator()(C z) const;

  // Max coefficient magnitude.
  R scale() const;
  // Sum of |c_k| |z|^k, the natural magnitude against which p(z) is judged.
  R abs_bound(C z) const;

  BasicPolynomial derivative() const;
  // Coefficients of w -> p(z0 + w), i.e. the Taylor coefficients at z0.
  BasicPolynomial shifted(C z0) const;
  // Quotient of p / (z - root); the remainder is discarded.
  BasicPolynomial deflated(C root) const;

  template <class S>
  BasicPolynomial<S> cast() const {
    std::vector<std::complex<S>> v;
    v.reserve(coeffs_.size());
    for (const auto& c : coeffs_) v.emplace_back(S(c.real()), S(c.imag()));
    return BasicPolynomial<S>(std::move(v));
  }

  BasicPolynomial& operator+=(const BasicPolynomial& other);
  BasicPolynomial& operator-=(const BasicPolynomial& other);
  BasicPolynomial& operator*=(C s);

  friend BasicPolynomial operator+(BasicPolynomial a, const BasicPolynomial& b) { return a += b; }
  friend BasicPolynomial operator-(BasicPolynomial a, const BasicPolynomial& b) { return a -= b; }
  friend BasicPolynomial operator*(BasicPolynomial a, C s) { return a *= s; }
  friend BasicPolynomial operator*(C s, BasicPolynomial a) { return a *= s; }
  friend BasicPolynomial operator*(const BasicPolynomial& a, const BasicPolynomial& b) {
    return a.times(b);
  }

  friend bool operator==(const BasicPolynomial&, const BasicPolynomial&) = default;

 private:
  void trim();
  BasicPolynomial times(const BasicPolynomial& b) const;

  std::vector<C> coeffs_;
};

using Polynomial = BasicPolynomial<Real>;
using QuadPolynomial = BasicPolynomial<Quad>;

inline Complex poly_eval(const Polynomial& p, Complex z) { return p(z); }

template <class R>
struct BasicRoot {
  std::complex<R> value;
  int multiplicity = 1;
};

// Roots with multiplicities; total multiplicity equals the source degree.
template <class R>
class BasicRootSet {
 public:
  using C = std::complex<R>;

  BasicRootSet() = default;
  explicit BasicRootSet(std::vector<BasicRoot<R>> roots) : roots_(std::move(roots)) {}

  std::span<const BasicRoot<R>> roots() const { return roots_; }
  std::size_t size() const { return roots_.size(); }
  bool empty() const { return roots_.empty(); }
  int total_multiplicity() const;
  // Every root repeated according to its multiplicity.
  std::vector<C> expanded() const;

 private:
  std::vector<BasicRoot<R>> roots_;
};

using Root = BasicRoot<Real>;
using RootSet = BasicRootSet<Real>;

struct RootOptions {
  // Acceptance threshold on |p(r)| relative to sum |c_k||r|^k.
  Real tol = 1e-9;
  // Roots closer than this (relative) are merged into one multiple root.
  Real cluster_tol = 1e-7;
  int polish_steps = 3;
};

/**
 * All roots of p with multiplicities.
 *
 * Eigenvalues of the companion matrix of the rescaled polynomial
 * p(s w), s chosen so that |c_0| and |c_n| balance, followed by a few
 * Newton steps on the original polynomial. Roots within cluster_tol of
 * each other are reported once at their centroid.
 *
 * Throws NumericalError("undefined roots") for the zero polynomial and
 * RootFindingError when the eigen solver fails or a root misses tol.
 */
template <class R>
BasicRootSet<R> poly_roots(const BasicPolynomial<R>& p, const RootOptions& opts = {});
// Unclustered roots, one entry per multiplicity.
template <class R>
std::vector<std::complex<R>> poly_roots_raw(const BasicPolynomial<R>& p, const RootOptions& opts = {});

// Merge nearby roots (relative distance cluster_tol) into centroids.
template <class R>
BasicRootSet<R> cluster_roots(std::vector<std::complex<R>> roots, Real cluster_tol);

template <class R>
BasicPolynomial<R> poly_from_roots(std::span<const std::complex<R>> roots,
                                   std::complex<R> leading = std::complex<R>(1));
template <class R>
BasicPolynomial<R> poly_from_roots(const BasicRootSet<R>& roots,
                                   std::complex<R> leading = std::complex<R>(1)) {
  const auto flat = roots.expanded();
  return poly_from_roots(std::span<const std::complex<R>>(flat), leading);
}
inline Polynomial poly_from_roots(std::span<const Complex> roots, Complex leading = 1.0) {
  return poly_from_roots<Real>(roots, leading);
}
inline Polynomial poly_from_roots(const std::vector<Complex>& roots, Complex leading = 1.0) {
  return poly_from_roots<Real>(std::span<const Complex>(roots), leading);
}

template <class R>
struct BasicCommonFactorResult {
  BasicPolynomial<R> p;
  BasicPolynomial<R> q;
  // Roots left over after cancellation, one entry per multiplicity.
  std::vector<std::complex<R>> p_roots;
  std::vector<std::complex<R>> q_roots;
  int cancelled = 0;
};

using CommonFactorResult = BasicCommonFactorResult<Real>;

/**
 * Cancel root pairs of p and q lying within relative distance tol_gcd.
 *
 * Matching is one-to-one and greedy by distance; ties are broken by the
 * lexicographic order of the roots. Matched roots are divided out of p
 * and q by deflation, so leading coefficients are preserved.
 */
template <class R>
BasicCommonFactorResult<R> remove_common_factors_detailed(const BasicPolynomial<R>& p,
                                                          const BasicPolynomial<R>& q, Real tol_gcd);
template <class R>
std::pair<BasicPolynomial<R>, BasicPolynomial<R>> remove_common_factors(const BasicPolynomial<R>& p,
                                                                        const BasicPolynomial<R>& q,
                                                                        Real tol_gcd) {
  auto r = remove_common_factors_detailed(p, q, tol_gcd);
  return {std::move(r.p), std::move(r.q)};
}

}  // namespace padelab
