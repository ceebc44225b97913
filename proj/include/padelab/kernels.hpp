#pragma once

// Data-parallel loops used by the grid scans and order sweeps.
//
// Every kernel has a serial reference version and an OpenMP version with
// identical results: work items write to their own slot and all reductions
// happen afterwards in index order, so the thread count never changes an
// output bit. Tests compare the two paths; bench/ times them.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <exception>
#include <limits>
#include <span>
#include <vector>

#include <omp.h>

#include "padelab/compact_set.hpp"
#include "padelab/scalar.hpp"

namespace padelab::kernels {

enum class Exec { serial, parallel };

// Caps OpenMP parallelism (<= 0 restores the runtime default).
inline void set_thread_cap(int threads) {
  static const int default_threads = omp_get_max_threads();
  omp_set_num_threads(threads > 0 ? std::min(threads, default_threads) : default_threads);
}
inline int thread_count() { return omp_get_max_threads(); }

namespace serial {

template <class Body>
void for_each_index(std::size_t count, Body&& body) {
  for (std::size_t i = 0; i < count; ++i) body(i);
}

}  // namespace serial

namespace parallel {

// Exceptions thrown by body are caught per item; the one with the lowest
// index is rethrown after the loop so failures are reproducible.
template <class Body>
void for_each_index(std::size_t count, Body&& body) {
  std::exception_ptr first_error;
  std::size_t first_index = std::numeric_limits<std::size_t>::max();
  const auto n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(padelab_kernel_error)
      {
        if (static_cast<std::size_t>(i) < first_index) {
          first_index = static_cast<std::size_t>(i);
          first_error = std::current_exception();
        }
      }
    }
  }
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace parallel

template <class Body>
void for_each_index(std::size_t count, Body&& body, Exec exec) {
  if (exec == Exec::parallel)
    parallel::for_each_index(count, std::forward<Body>(body));
  else
    serial::for_each_index(count, std::forward<Body>(body));
}

// out[i] = fn(points[i])
template <class T, class Fn>
std::vector<T> map_points(std::span<const Complex> points, Fn&& fn, Exec exec) {
  std::vector<T> out(points.size());
  for_each_index(points.size(), [&](std::size_t i) { out[i] = fn(points[i]); }, exec);
  return out;
}

// max_i |fn(points[i])|; NaN if any value is NaN, 0 for an empty point set.
template <class Fn>
Real max_abs(std::span<const Complex> points, Fn&& fn, Exec exec) {
  const auto values = map_points<Real>(points, [&](Complex z) { return static_cast<Real>(std::abs(fn(z))); }, exec);
  Real best = 0.0;
  for (const Real v : values) {
    if (std::isnan(v)) return v;
    best = std::max(best, v);
  }
  return best;
}

// Row-major samples of fn on the (nx+1) x (ny+1) lattice spanning box.
template <class Fn>
std::vector<Real> grid_values(const Box& box, int nx, int ny, Fn&& fn, Exec exec) {
  const auto cols = static_cast<std::size_t>(nx + 1);
  const auto rows = static_cast<std::size_t>(ny + 1);
  std::vector<Real> out(cols * rows);
  for_each_index(rows, [&](std::size_t j) {
    const Real y = box.ymin + (box.ymax - box.ymin) * static_cast<Real>(j) / ny;
    for (std::size_t i = 0; i < cols; ++i) {
      const Real x = box.xmin + (box.xmax - box.xmin) * static_cast<Real>(i) / nx;
      out[j * cols + i] = fn(Complex(x, y));
    }
  }, exec);
  return out;
}

}  // namespace padelab::kernels
