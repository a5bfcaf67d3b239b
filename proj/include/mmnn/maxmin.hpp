#pragma once

#include <span>

#include "mmnn/errors.hpp"

namespace mmnn {

// Lattice operations on nonnegative reals: vee = join (max), wedge = meet (min).
// The operator evaluation loops are written in terms of these.

inline double vee(double x, double y) { return y > x ? y : x; }

inline double wedge(double x, double y) { return y < x ? y : x; }

inline double vee(std::span<const double> xs) {
  if (xs.empty()) throw DomainError("vee over an empty sequence");
  double m = xs[0];
  for (std::size_t i = 1; i < xs.size(); ++i) m = vee(m, xs[i]);
  return m;
}

inline double wedge(std::span<const double> xs) {
  if (xs.empty()) throw DomainError("wedge over an empty sequence");
  double m = xs[0];
  for (std::size_t i = 1; i < xs.size(); ++i) m = wedge(m, xs[i]);
  return m;
}

}  // namespace mmnn
