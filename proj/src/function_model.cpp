#include "padelab/function_model.hpp"

#include <algorithm>
#include <cmath>

#include "padelab/errors.hpp"

namespace padelab {

TargetFunction::TargetFunction(Polynomial numerator, Polynomial denominator,
                               std::optional<ExpTerm> exp_term, Polynomial entire_polynomial)
    : num_(std::move(numerator)),
      den_(std::move(denominator)),
      exp_(exp_term),
      poly_(std::move(entire_polynomial)) {
  if (den_.is_zero()) throw ConfigError("target function: denominator is identically zero");
  if (den_.degree() >= 1) {
    const RootSet den_roots = poly_roots(den_);
    for (const auto& r : den_roots.roots()) poles_.push_back({r.value, r.multiplicity});
    if (num_.degree() >= 1) {
      for (const auto& a : poly_roots_raw(num_))
        for (const auto& p : poles_)
          if (std::abs(a - p.location) <= kCoprimeTol * std::max(1.0, std::abs(a)))
            throw ConfigError("target function: numerator and denominator share a root");
    }
  }
}

TargetFunction TargetFunction::partial_fractions(std::span<const Complex> poles,
                                                 std::span<const Complex> residues) {
  if (poles.size() != residues.size())
    throw ConfigError("partial fractions: pole and residue counts differ");
  Polynomial num;
  const Polynomial den = poly_from_roots(poles);
  for (std::size_t k = 0; k < poles.size(); ++k) {
    std::vector<Complex> others;
    for (std::size_t j = 0; j < poles.size(); ++j)
      if (j != k) others.push_back(poles[j]);
    num += poly_from_roots(std::span<const Complex>(others), residues[k]);
  }
  return TargetFunction(std::move(num), den);
}

Real TargetFunction::distance_to_poles(Complex z) const {
  Real d = kInfinity;
  for (const auto& p : poles_) d = std::min(d, std::abs(z - p.location));
  return d;
}

template <class R>
void TargetFunction::check_pole_proximity(const std::complex<R>& z) const {
  for (const auto& p : poles_)
    if (std::abs(z - widen<R>(p.location)) <= R(kPoleProximity))
      throw PoleProximityError("pole proximity: evaluation within 1e-12 of a pole");
}

template <class R>
std::complex<R> TargetFunction::eval(std::complex<R> z) const {
  using C = std::complex<R>;
  check_pole_proximity(z);
  C v = num_.cast<R>()(z) / den_.cast<R>()(z);
  if (exp_) v += widen<R>(exp_->c) * std::exp(widen<R>(exp_->a) * z);
  if (!poly_.is_zero()) v += poly_.cast<R>()(z);
  return v;
}

template <class R>
std::vector<std::complex<R>> TargetFunction::taylor_as(std::complex<R> z0, int k) const {
  using C = std::complex<R>;
  check_pole_proximity(z0);
  const auto kk = static_cast<std::size_t>(k);
  std::vector<C> c(kk + 1, C(0));

  // num(z0 + w) / den(z0 + w) as a power series in w.
  const auto a = num_.cast<R>().shifted(z0);
  const auto d = den_.cast<R>().shifted(z0);
  const C d0 = d[0];
  for (int j = 0; j <= k; ++j) {
    C acc = a[j];
    for (int i = 1; i <= std::min(j, d.degree()); ++i) acc -= d[i] * c[static_cast<std::size_t>(j - i)];
    c[static_cast<std::size_t>(j)] = acc / d0;
  }

  if (exp_) {
    const C ea = widen<R>(exp_->a);
    C term = widen<R>(exp_->c) * std::exp(ea * z0);
    for (int j = 0; j <= k; ++j) {
      c[static_cast<std::size_t>(j)] += term;
      term *= ea / C(R(j + 1));
    }
  }
  if (!poly_.is_zero()) {
    const auto s = poly_.cast<R>().shifted(z0);
    for (int j = 0; j <= std::min(k, s.degree()); ++j) c[static_cast<std::size_t>(j)] += s[j];
  }
  return c;
}

template Complex TargetFunction::eval<Real>(Complex) const;
template std::complex<Quad> TargetFunction::eval<Quad>(std::complex<Quad>) const;
template std::vector<Complex> TargetFunction::taylor_as<Real>(Complex, int) const;
template std::vector<std::complex<Quad>> TargetFunction::taylor_as<Quad>(std::complex<Quad>, int) const;

TargetFunction TargetFunction::scaled(Complex s) const {
  std::optional<ExpTerm> e = exp_;
  if (e) e->c *= s;
  TargetFunction out = *this;
  out.num_ = num_ * s;
  out.exp_ = e;
  out.poly_ = poly_ * s;
  return out;
}

}  // namespace padelab
