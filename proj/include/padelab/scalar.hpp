#pragma once

#include <complex>
#include <limits>
#include <string_view>

#include <boost/multiprecision/float128.hpp>

namespace padelab {

// Geometry, potentials and reported statistics are binary64. The numeric
// core (polynomials, root finding, divided differences, the Pade build and
// error norms) is templated on the real type and instantiated for Real and
// Quad; Quad is IEEE binary128 through libquadmath.
using Real = double;
using Complex = std::complex<Real>;
using Quad = boost::multiprecision::float128;

template <class R>
using ComplexOf = std::complex<R>;

enum class Precision { binary64, quad };

std::string_view to_string(Precision p);
// "binary64" or "quad"; throws ConfigError otherwise.
Precision parse_precision(std::string_view name);

inline constexpr Real kInfinity = std::numeric_limits<Real>::infinity();
inline constexpr Real kPi = 3.14159265358979323846264338327950288;

// Lexicographic (real, imag) ordering used wherever ties must be broken
// reproducibly.
template <class R>
bool lex_less(const std::complex<R>& a, const std::complex<R>& b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

template <class R>
std::complex<R> widen(Complex z) {
  return {R(z.real()), R(z.imag())};
}

template <class R>
Complex narrow(const std::complex<R>& z) {
  return {static_cast<Real>(z.real()), static_cast<Real>(z.imag())};
}

template <class R>
Real narrow(const R& x) {
  return static_cast<Real>(x);
}

}  // namespace padelab
