#pragma once

#include <cstdint>

#include "mmnn/sigmoid.hpp"

namespace mmnn {

/// Centered bell built from a sigmoid difference:
///   phi(x) = (sigma(s*(x+1)) - sigma(s*(x-1))) / 2
/// with s the shift scale.  phi is even, bounded by 1/2, nonincreasing on
/// [0, inf), and its integer translates sum to 1.
class BellKernel {
 public:
  explicit BellKernel(Sigmoid sigmoid, double shift_scale = 1.0);

  double operator()(double x) const;

  const Sigmoid& sigmoid() const { return sigmoid_; }
  double shift_scale() const { return shift_scale_; }

  bool compact_support() const;
  // Smallest r with phi(x) = 0 for |x| >= r; +inf for the smooth kinds.
  double support_radius() const;

 private:
  Sigmoid sigmoid_;
  double shift_scale_;
};

/// Largest translate weight over the cell range: max_{k_lo<=k<=k_hi} phi(n*x - k).
/// Throws ZeroDenominator when every admissible translate vanishes (possible for
/// compactly supported bells when x is far from all cells).
double phi_max_over_cells(const BellKernel& bell, std::int64_t n, double x,
                          std::int64_t k_lo, std::int64_t k_hi);

/// Supremum of phi over lattice offsets beyond n*delta; by evenness and
/// monotonicity this is phi evaluated at the smallest admissible offset.
double phi_tail_sup(const BellKernel& bell, std::int64_t n, double delta);

/// Truncated generalized moment sup_u phi(u)|u|^beta, scanned on a uniform grid
/// of step grid_step up to |u| <= trunc.  The caller widens trunc until stable.
double generalized_moment(const BellKernel& bell, double beta, std::int64_t trunc,
                          double grid_step = 1e-3);

/// generalized_moment with the truncation radius doubled until the value moves
/// by less than 1e-9 relatively (radius capped at 8192).
double generalized_moment_stable(const BellKernel& bell, double beta);

}  // namespace mmnn
