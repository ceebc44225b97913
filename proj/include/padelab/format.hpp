#pragma once

#include <charconv>
#include <cmath>
#include <string>

#include "padelab/scalar.hpp"

namespace padelab {

// Shortest round-trip decimal form, independent of the C locale.
// Non-finite values print as inf, -inf and nan.
inline std::string format_real(Real v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace padelab
