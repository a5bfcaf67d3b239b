#pragma once

#include <cstdint>
#include <functional>

#include "mmnn/chi.hpp"
#include "mmnn/signal.hpp"

namespace mmnn {

struct QuadratureConfig {
  enum class Mode {
    closed_form_preferred,  // exact path when shape x representation allows
    composite,              // midpoint panels per lattice cell
    adaptive                // bisection engine; reserved for oracles and checks
  };
  Mode mode = Mode::closed_form_preferred;
  int panels_per_cell = 64;
  double tol = 1e-10;
};

/// Adaptive bisection with an embedded Simpson pair; refines until the local
/// error estimate fits the budget.  Throws QuadratureFailure when the depth
/// limit is exhausted before convergence.
double integrate_adaptive(const std::function<double(double)>& g, double lo,
                          double hi, double tol);

/// integral over [a, b] of chi(n t - k) dt, for integer endpoints a < b.
/// Always within [unit_integral/n, l1_norm/n] for na <= k <= nb - 1.
double chi_cell_mass(const ChiKernel& chi, std::int64_t n, std::int64_t k,
                     std::int64_t a, std::int64_t b,
                     const QuadratureConfig& q = {});

/// Normalized kernel average of f against the translate chi(n t - k):
///   integral chi(n t - k) f(t) dt / integral chi(n t - k) dt  over [a, b].
/// Piecewise representations integrate exactly through antiderivatives; closed
/// forms fall back to composite midpoint panels (per lattice cell, restricted
/// to the kernel support when compact).
double chi_weighted_mean(const ChiKernel& chi, const Signal& f, std::int64_t n,
                         std::int64_t k, const QuadratureConfig& q = {});

/// Cell mean n * integral of f over [k/n, (k+1)/n]; exact for piecewise and
/// sine representations.
double kantorovich_mean(const Signal& f, std::int64_t n, std::int64_t k,
                        const QuadratureConfig& q = {});

}  // namespace mmnn
