#include <doctest.h>

#include "helpers.hpp"
#include "padelab/errors.hpp"
#include "padelab/function_model.hpp"

using namespace padelab;

namespace {

TargetFunction one_over_one_minus_z() { return TargetFunction::rational(Polynomial{1.0}, Polynomial{1.0, -1.0}); }

}  // namespace

TEST_CASE("model_eval examples") {
  CHECK(std::abs(one_over_one_minus_z()(0.5) - 2.0) < 1e-15);
  CHECK(TargetFunction::exponential()(0.0) == Complex(1.0));
  CHECK(std::abs(testing::montessus()(0.0) - (-13.0 / 12.0)) < 1e-15);
}

TEST_CASE("evaluation near a pole is rejected") {
  const auto f = testing::montessus();
  CHECK_THROWS_AS(f(2.0), PoleProximityError);
  CHECK_THROWS_AS(f(3.0 + 1e-13), PoleProximityError);
  CHECK_NOTHROW(f(3.0 + 1e-9));
  CHECK_THROWS_AS(f.taylor(4.0, 2), PoleProximityError);
}

TEST_CASE("model_taylor examples") {
  const auto a = one_over_one_minus_z().taylor(0.0, 3);
  REQUIRE(a.size() == 4);
  for (const auto& c : a) CHECK(std::abs(c - 1.0) < 1e-15);
  const auto b = TargetFunction::exponential().taylor(0.0, 2);
  CHECK(std::abs(b[0] - 1.0) < 1e-15);
  CHECK(std::abs(b[1] - 1.0) < 1e-15);
  CHECK(std::abs(b[2] - 0.5) < 1e-15);
  const auto c = TargetFunction::rational(Polynomial{1.0}, Polynomial{-2.0, 1.0}).taylor(0.0, 1);
  CHECK(std::abs(c[0] + 0.5) < 1e-15);
  CHECK(std::abs(c[1] + 0.25) < 1e-15);
}

TEST_CASE("model_poles examples") {
  const auto p = TargetFunction::rational(Polynomial{1.0}, poly_from_roots(std::vector<Complex>{2.0, 3.0})).poles();
  REQUIRE(p.size() == 2);
  CHECK(std::abs(p[0].location - 2.0) < 1e-12);
  CHECK(p[0].order == 1);
  CHECK(std::abs(p[1].location - 3.0) < 1e-12);
  CHECK(TargetFunction::exponential().poles().empty());
  const auto d = TargetFunction::rational(Polynomial{1.0}, Polynomial{4.0, -4.0, 1.0}).poles();
  REQUIRE(d.size() == 1);
  CHECK(std::abs(d[0].location - 2.0) < 1e-7);
  CHECK(d[0].order == 2);
}

TEST_CASE("rational part must be coprime") {
  CHECK_THROWS_AS(TargetFunction::rational(Polynomial{-1.0, 1.0}, poly_from_roots(std::vector<Complex>{1.0, 2.0})),
                  ConfigError);
}

TEST_CASE("Taylor polynomial error scales like |z - z0|^(k+1)") {
  const TargetFunction f(Polynomial{1.0, Complex(0.0, 2.0)}, poly_from_roots(std::vector<Complex>{2.0, Complex(-1.0, 1.5)}),
                         ExpTerm{Complex(0.5, 0.0), Complex(1.0, -0.5)}, Polynomial{0.0, 3.0});
  const Complex z0(0.3, -0.2);
  const int k = 5;
  const auto c = f.taylor(z0, k);
  auto worst = [&](Real h) {
    Real err = 0.0;
    for (int j = 0; j < 16; ++j) {
      const Complex w = std::polar(h, 2.0 * kPi * j / 16.0);
      Complex t = 0.0, wp = 1.0;
      for (int i = 0; i <= k; ++i, wp *= w) t += c[static_cast<std::size_t>(i)] * wp;
      err = std::max(err, std::abs(f(z0 + w) - t));
    }
    return err;
  };
  // Halving the radius divides the error by about 2^(k+1) = 64.
  const Real ratio = worst(0.1) / worst(0.05);
  CHECK(ratio > 40.0);
  CHECK(ratio < 100.0);
}

TEST_CASE("residues at simple poles from four directions") {
  const std::vector<Complex> poles{Complex(1.0, 1.0), -2.0}, residues{Complex(0.5, -1.0), 3.0};
  const auto f = TargetFunction::partial_fractions(poles, residues);
  for (std::size_t p = 0; p < poles.size(); ++p)
    for (int dir = 0; dir < 4; ++dir) {
      const Complex h = std::polar(1e-7, kPi * dir / 2.0);
      CHECK(std::abs(h * f(poles[p] + h) - residues[p]) < 1e-6);
    }
}

TEST_CASE("scaled multiplies every part") {
  const TargetFunction f(Polynomial{1.0}, Polynomial{-2.0, 1.0}, ExpTerm{1.0, 1.0}, Polynomial{1.0, 1.0});
  const auto g = f.scaled(Complex(0.0, 3.0));
  for (const Complex z : {Complex(0.1, 0.2), Complex(-1.0, 0.5)})
    CHECK(std::abs(g(z) - Complex(0.0, 3.0) * f(z)) < 1e-13);
}

TEST_CASE("quad evaluation agrees with binary64") {
  const auto f = testing::montessus();
  const Complex z(0.4, 0.7);
  CHECK(std::abs(narrow(f.eval<Quad>(widen<Quad>(z))) - f(z)) < 1e-15);
  const auto tq = f.taylor_as<Quad>(widen<Quad>(z), 6);
  const auto td = f.taylor(z, 6);
  for (int k = 0; k <= 6; ++k) CHECK(std::abs(narrow(tq[static_cast<std::size_t>(k)]) - td[static_cast<std::size_t>(k)]) < 1e-13);
}
