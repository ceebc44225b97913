#include <doctest.h>

#include <random>
#include <stdexcept>

#include <omp.h>

#include "helpers.hpp"
#include "padelab/kernels.hpp"
#include "padelab/potential.hpp"

using namespace padelab;
using kernels::Exec;

namespace {

// Oversubscribe so the parallel path really runs on several threads.
struct Threads {
  explicit Threads(int n) : saved(omp_get_max_threads()) { omp_set_num_threads(n); }
  ~Threads() { omp_set_num_threads(saved); }
  int saved;
};

std::vector<Complex> random_points(std::size_t count, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::vector<Complex> pts;
  for (std::size_t k = 0; k < count; ++k) pts.push_back(testing::random_complex(rng, 0.0, 3.0));
  return pts;
}

}  // namespace

TEST_CASE("for_each_index covers every index once") {
  Threads t(4);
  std::vector<int> hits(1000, 0);
  kernels::for_each_index(hits.size(), [&](std::size_t i) { ++hits[i]; }, Exec::parallel);
  for (const int h : hits) CHECK(h == 1);
}

TEST_CASE("the lowest failing index is rethrown") {
  Threads t(4);
  auto body = [](std::size_t i) {
    if (i % 97 == 13) throw std::runtime_error("index " + std::to_string(i));
  };
  for (const Exec e : {Exec::serial, Exec::parallel}) {
    try {
      kernels::for_each_index(500, body, e);
      FAIL("expected an exception");
    } catch (const std::runtime_error& err) {
      CHECK(std::string(err.what()) == "index 13");
    }
  }
}

TEST_CASE("map_points and max_abs agree between serial and parallel") {
  Threads t(4);
  const auto pts = random_points(5000, 3);
  const Measure mu = Measure::discrete(random_points(37, 4));
  auto fn = [&](Complex z) { return mu.exp_neg_potential(z); };
  CHECK(kernels::map_points<Real>(pts, fn, Exec::serial) == kernels::map_points<Real>(pts, fn, Exec::parallel));
  const auto g = [](Complex z) { return std::exp(z) / (z - 5.0); };
  CHECK(kernels::max_abs(pts, g, Exec::serial) == kernels::max_abs(pts, g, Exec::parallel));
  CHECK(kernels::max_abs(std::span<const Complex>(), g, Exec::parallel) == 0.0);
  const auto nan_at = [](Complex z) { return z == Complex(1.0) ? Complex(std::nan(""), 0.0) : z; };
  const std::vector<Complex> with_nan{0.5, 1.0, 2.0};
  CHECK(std::isnan(kernels::max_abs(with_nan, nan_at, Exec::parallel)));
}

TEST_CASE("grid scans agree bit for bit") {
  Threads t(4);
  const Measure mu = Measure::discrete(random_points(25, 8));
  const LevelRegion D(mu, 1.7);
  const Box box{-4.0, 4.0, -3.0, 3.0};
  const auto a = level_grid(D, box, 150, 110, Exec::serial);
  const auto b = level_grid(D, box, 150, 110, Exec::parallel);
  CHECK(a.values == b.values);
  const auto ra = rho_extrema(CompactSet::disk(0.2, 1.3), mu, GridSpec{120, 512}, Exec::serial);
  const auto rb = rho_extrema(CompactSet::disk(0.2, 1.3), mu, GridSpec{120, 512}, Exec::parallel);
  CHECK(ra.rho_min == rb.rho_min);
  CHECK(ra.rho_max == rb.rho_max);
}

TEST_CASE("cluster masses agree between serial and parallel") {
  Threads t(4);
  const auto centers = random_points(300, 12);
  std::vector<std::vector<Complex>> lists;
  for (unsigned s = 0; s < 20; ++s) lists.push_back(random_points(10 + s, 100 + s));
  CHECK(cluster_masses(centers, 0.4, lists, Exec::serial) == cluster_masses(centers, 0.4, lists, Exec::parallel));
}

TEST_CASE("order sweeps are identical under both execution policies") {
  Threads t(4);
  auto setup = testing::montessus_setup(Precision::binary64, 30);
  setup.exec = Exec::serial;
  const auto a = build_sweep(setup, NRange{4, 24});
  setup.exec = Exec::parallel;
  const auto b = build_sweep(setup, NRange{4, 24});
  REQUIRE(a.entries.size() == b.entries.size());
  for (std::size_t k = 0; k < a.entries.size(); ++k) {
    REQUIRE(a.entries[k].approx.has_value() == b.entries[k].approx.has_value());
    if (!a.entries[k].approx) continue;
    const auto pa = to_binary64(*a.entries[k].approx), pb = to_binary64(*b.entries[k].approx);
    CHECK(pa.P == pb.P);
    CHECK(pa.Q == pb.Q);
  }
  const auto ra = rate_sequence(setup, a, 0.01), rb = rate_sequence(setup, b, 0.01);
  for (std::size_t k = 0; k < ra.rows.size(); ++k) CHECK(ra.rows[k].e_n == rb.rows[k].e_n);
}
