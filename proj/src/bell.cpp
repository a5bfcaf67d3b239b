#include "mmnn/bell.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mmnn/errors.hpp"

namespace mmnn {

BellKernel::BellKernel(Sigmoid sigmoid, double shift_scale)
    : sigmoid_(sigmoid), shift_scale_(shift_scale) {
  if (!(shift_scale_ > 0.0)) throw DomainError("bell shift scale must be positive");
}

double BellKernel::operator()(double x) const {
  // Folding to |x| makes evenness bit-exact; the smooth sigmoids only honor
  // sigma(y) + sigma(-y) = 1 up to rounding.
  x = std::abs(x);
  const double v =
      0.5 * (sigmoid_(shift_scale_ * (x + 1.0)) - sigmoid_(shift_scale_ * (x - 1.0)));
  // The difference is nonnegative by monotonicity; clamp round-off.
  return v > 0.0 ? v : 0.0;
}

bool BellKernel::compact_support() const {
  return !sigmoid_is_smooth(sigmoid_.kind());
}

double BellKernel::support_radius() const {
  if (!compact_support()) return std::numeric_limits<double>::infinity();
  // Both sigmoid terms saturate once slope*scale*(|x| - 1) exceeds 1/2.
  return 1.0 + 0.5 / (sigmoid_.slope() * shift_scale_);
}

double phi_max_over_cells(const BellKernel& bell, std::int64_t n, double x,
                          std::int64_t k_lo, std::int64_t k_hi) {
  if (k_hi < k_lo) throw DomainError("phi_max_over_cells: empty cell range");
  if (n < 1) throw DomainError("phi_max_over_cells: n must be positive");
  const double nx = static_cast<double>(n) * x;
  // phi is even and nonincreasing in |.|, so the nearest admissible cell wins.
  const std::int64_t nearest = std::clamp(
      static_cast<std::int64_t>(std::llround(nx)), k_lo, k_hi);
  const double m = bell(nx - static_cast<double>(nearest));
  if (!(m > 0.0))
    throw ZeroDenominator("all bell weights vanish over the cell range");
  return m;
}

double phi_tail_sup(const BellKernel& bell, std::int64_t n, double delta) {
  if (n < 1 || !(delta > 0.0)) throw DomainError("phi_tail_sup: need n >= 1, delta > 0");
  return bell(static_cast<double>(n) * delta);
}

double generalized_moment(const BellKernel& bell, double beta, std::int64_t trunc,
                          double grid_step) {
  if (beta < 0.0) throw DomainError("generalized_moment: beta must be >= 0");
  if (trunc < 1 || !(grid_step > 0.0))
    throw DomainError("generalized_moment: bad truncation or grid step");
  // Offsets x - k with x in one period and k in Z tile the positive grid, so a
  // single scan of phi(u) u^beta over u in [0, trunc] realizes the sup.
  const auto steps = static_cast<std::int64_t>(
      std::ceil(static_cast<double>(trunc) / grid_step));
  double best = 0.0;
  for (std::int64_t i = 0; i <= steps; ++i) {
    const double u = static_cast<double>(i) * grid_step;
    const double v = bell(u) * std::pow(u, beta);
    if (v > best) best = v;
  }
  return best;
}

double generalized_moment_stable(const BellKernel& bell, double beta) {
  double prev = generalized_moment(bell, beta, 16);
  for (std::int64_t trunc = 32; trunc <= 8192; trunc *= 2) {
    const double cur = generalized_moment(bell, beta, trunc);
    const double scale = std::max(std::abs(cur), 1e-300);
    if (std::abs(cur - prev) <= 1e-9 * scale) return cur;
    prev = cur;
  }
  return prev;  // slowest-decaying configurations: best available estimate
}

}  // namespace mmnn
