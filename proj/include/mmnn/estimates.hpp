#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mmnn/chi.hpp"
#include "mmnn/operators.hpp"
#include "mmnn/signal.hpp"

namespace mmnn {

/// Grid modulus of continuity sup{|f(x)-f(y)| : |x-y| <= delta}; computed with
/// a sliding window over a uniform grid, so it converges to the true value
/// from below as grid_step shrinks.
double modulus_of_continuity(const Signal& f, double delta,
                             double grid_step = 1e-4);

/// Everything the quantitative sup-error bound needs besides the modulus values.
struct BoundInputs {
  std::int64_t n = 1;
  double delta_n = 0.0;        // tail split radius
  double Delta_n = 0.0;        // averaging modulus argument
  double alpha = 1.0;          // declared sigmoid decay exponent
  KernelConstants constants;   // averaging kernel constants (finite abs_moment1!)
  double phi2 = 0.0;           // bell weight at offset 2 (positive)
  double m_1plus_alpha = 0.0;  // generalized bell moment of order 1 + alpha
};

/// Closed-form right side of the Durrmeyer sup-error estimate:
///   omega_Delta/unit_integral * (l1_norm + abs_moment1/(n*Delta_n))
///   + max(m_{1+alpha} / (phi2 * (n*delta_n)^{1+alpha}), omega_delta).
/// Throws NonIntegrable when abs_moment1 is infinite and ZeroDenominator when
/// phi2 is not positive.
double sup_error_bound(const BoundInputs& in, double omega_Delta,
                       double omega_delta);

struct ConvergenceRow {
  std::int64_t n = 0;
  double sup_error = 0.0;
  double lp_error = 0.0;  // grid quadrature of ((b-a) * mean |err|^p)^(1/p)
  double p = 2.0;
  std::optional<double> bound;  // sup-error bound when requested
};

/// Errors of the configured family over a list of n; when with_bound is set the
/// bound column is filled (requires a chi with finite abs_moment1) using
/// delta_n = Delta_n = n^{-1/2} and a 5% safety inflation on the grid modulus.
std::vector<ConvergenceRow> convergence_study(const OperatorConfig& base,
                                              const Signal& f,
                                              std::span<const std::int64_t> ns,
                                              double p, std::size_t grid_m,
                                              bool with_bound, int threads = 1);

}  // namespace mmnn
