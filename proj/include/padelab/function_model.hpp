#pragma once

#include <optional>
#include <vector>

#include "padelab/polynomial.hpp"

namespace padelab {

struct Pole {
  Complex location;
  int order = 1;
};

using PoleList = std::vector<Pole>;

// c * exp(a z)
struct ExpTerm {
  Complex c;
  Complex a;
};

/**
 * Closed-form target function f = num/den + c e^{a z} + poly(z).
 *
 * The rational part must be coprime; poles are computed once from the
 * denominator at construction.
 */
class TargetFunction {
 public:
  static constexpr Real kPoleProximity = 1e-12;
  static constexpr Real kCoprimeTol = 1e-10;

  TargetFunction(Polynomial numerator, Polynomial denominator,
                 std::optional<ExpTerm> exp_term = std::nullopt,
                 Polynomial entire_polynomial = {});

  static TargetFunction rational(Polynomial numerator, Polynomial denominator) {
    return TargetFunction(std::move(numerator), std::move(denominator));
  }
  static TargetFunction exponential(Complex c = 1.0, Complex a = 1.0) {
    return TargetFunction({}, Polynomial::constant(1.0), ExpTerm{c, a});
  }
  // sum_k residues[k] / (z - poles[k])
  static TargetFunction partial_fractions(std::span<const Complex> poles,
                                          std::span<const Complex> residues);

  const Polynomial& numerator() const { return num_; }
  const Polynomial& denominator() const { return den_; }
  const std::optional<ExpTerm>& exp_term() const { return exp_; }
  const Polynomial& entire_polynomial() const { return poly_; }
  bool is_rational() const { return !exp_.has_value(); }

  // Throws PoleProximityError within kPoleProximity of a pole.
  Complex operator()(Complex z) const { return eval<Real>(z); }
  // Taylor coefficients c_0..c_k at z0 by power-series division.
  std::vector<Complex> taylor(Complex z0, int k) const { return taylor_as<Real>(z0, k); }

  // The same in working precision R (coefficients are widened exactly).
  template <class R>
  std::complex<R> eval(std::complex<R> z) const;
  template <class R>
  std::vector<std::complex<R>> taylor_as(std::complex<R> z0, int k) const;
  const PoleList& poles() const { return poles_; }
  Real distance_to_poles(Complex z) const;

  // The same function multiplied by a nonzero constant.
  TargetFunction scaled(Complex s) const;

 private:
  template <class R>
  void check_pole_proximity(const std::complex<R>& z) const;

  Polynomial num_;
  Polynomial den_;
  std::optional<ExpTerm> exp_;
  Polynomial poly_;
  PoleList poles_;
};

inline Complex model_eval(const TargetFunction& f, Complex z) { return f(z); }
inline std::vector<Complex> model_taylor(const TargetFunction& f, Complex z0, int k) {
  return f.taylor(z0, k);
}
inline PoleList model_poles(const TargetFunction& f) { return f.poles(); }

}  // namespace padelab
