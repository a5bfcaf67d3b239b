#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mmnn/bell.hpp"
#include "mmnn/chi.hpp"
#include "mmnn/quadrature.hpp"
#include "mmnn/signal.hpp"

namespace mmnn {

// Max-min families combine per-cell coefficients with normalized bell weights
// through join/meet; the linear families use the classical weighted sums.
enum class Family {
  maxmin_sampling,     // coefficients f(k/n)
  maxmin_kantorovich,  // coefficients are cell means
  maxmin_durrmeyer,    // coefficients are chi-weighted means
  linear_sampling,
  linear_durrmeyer,
};

bool family_is_maxmin(Family f);
bool family_is_durrmeyer(Family f);
Family family_from_code(const std::string& code);  // D, K, F, LF, LD
std::string family_code(Family f);

struct OperatorConfig {
  Family family = Family::maxmin_durrmeyer;
  std::int64_t n = 1;
  BellKernel bell{Sigmoid(SigmoidKind::logistic)};
  std::optional<ChiKernel> chi;  // required by the Durrmeyer families
  QuadratureConfig quad;
};

struct CoefficientVector {
  std::int64_t k_lo = 0;
  std::int64_t k_hi = -1;
  std::vector<double> values;  // one per cell, within [0, 1]
  std::vector<double> masses;  // Durrmeyer: integral of chi(nt-k); else empty
  double max_value = 0.0;      // join of values, supports early loop exit

  std::int64_t count() const { return k_hi - k_lo + 1; }
};

/// Per-cell coefficients for (config, signal); cells are independent, so the
/// work may be split across threads.
CoefficientVector coefficients(const OperatorConfig& cfg, const Signal& f,
                               int threads = 1);

/// Operator value at each x (xs must lie in the signal domain).
std::vector<double> evaluate(const OperatorConfig& cfg, const Signal& f,
                             std::span<const double> xs, int threads = 1);

/// Evaluation against precomputed coefficients on domain [a, b]; this is the
/// pure weight/coefficient sweep that benchmarks time.
std::vector<double> evaluate_with(const OperatorConfig& cfg,
                                  const CoefficientVector& coeffs, double a,
                                  double b, std::span<const double> xs,
                                  int threads = 1);

/// Wraps samples on the uniform grid of [a, b] as a step signal (clamped to
/// [0, 1]) and evaluates the operator back on the same grid.
std::vector<double> denoise(const OperatorConfig& cfg,
                            std::span<const double> noisy, double a, double b,
                            int threads = 1);

/// Complement trick 1 - Op(1 - Op(noisy)): a second pass on the complement
/// turns surviving high impulses into removable low ones.  Not idempotent.
std::vector<double> complement_double_pass(const OperatorConfig& cfg,
                                           std::span<const double> noisy,
                                           double a, double b, int threads = 1);

}  // namespace mmnn
