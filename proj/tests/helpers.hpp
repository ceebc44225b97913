#pragma once

#include <random>
#include <vector>

#include <Eigen/Dense>

#include "padelab/lab.hpp"

namespace padelab::testing {

inline TargetFunction montessus() {
  const std::vector<Complex> poles{2.0, 3.0, 4.0}, residues{1.0, 1.0, 1.0};
  return TargetFunction::partial_fractions(poles, residues);
}

inline LabSetup montessus_setup(Precision precision = Precision::quad, int max_row = 60,
                                TriangularTable::Kind kind = RootsOfUnityTable{}) {
  return LabSetup{montessus(),
                  TriangularTable(std::move(kind), max_row),
                  CompactSet::circle(0.0, 1.0),
                  Measure::uniform_circle(0.0, 1.0),
                  2,
                  CompactSet::circle(0.0, 1.5),
                  GridSpec{},
                  precision,
                  PadeOptions{},
                  kernels::Exec::parallel};
}

// Classical Pade from Taylor coefficients c_0..c_{n+m}: q_0 = 1 and
// sum_j q_j c_{k-j} = 0 for k = n+1..n+m, then p_k = sum_j q_j c_{k-j}.
struct TaylorPade {
  std::vector<Complex> p;
  std::vector<Complex> q;
};

inline TaylorPade taylor_pade_oracle(const std::vector<Complex>& c, int n, int m) {
  auto coef = [&](int k) { return k < 0 ? Complex(0.0) : c[static_cast<std::size_t>(k)]; };
  std::vector<Complex> q(static_cast<std::size_t>(m) + 1, 0.0);
  q[0] = 1.0;
  if (m > 0) {
    Eigen::MatrixXcd A(m, m);
    Eigen::VectorXcd b(m);
    for (int r = 0; r < m; ++r) {
      const int k = n + 1 + r;
      for (int j = 1; j <= m; ++j) A(r, j - 1) = coef(k - j);
      b(r) = -coef(k);
    }
    const Eigen::VectorXcd x = A.fullPivLu().solve(b);
    for (int j = 1; j <= m; ++j) q[static_cast<std::size_t>(j)] = x(j - 1);
  }
  std::vector<Complex> p(static_cast<std::size_t>(n) + 1, 0.0);
  for (int k = 0; k <= n; ++k)
    for (int j = 0; j <= std::min(k, m); ++j) p[static_cast<std::size_t>(k)] += q[static_cast<std::size_t>(j)] * coef(k - j);
  return {p, q};
}

// Membership count by direct distance test.
inline Real brute_force_mass(const std::vector<Complex>& zeros, Complex z0, Real r) {
  if (zeros.empty()) return 0.0;
  int inside = 0;
  for (const auto& z : zeros) inside += std::abs(z - z0) <= r + 1e-12;
  return static_cast<Real>(inside) / static_cast<Real>(zeros.size());
}

inline Complex random_complex(std::mt19937_64& rng, Real lo, Real hi) {
  std::uniform_real_distribution<Real> radius(lo, hi), angle(0.0, 2.0 * kPi);
  return std::polar(radius(rng), angle(rng));
}

}  // namespace padelab::testing
