#include "mmnn/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "mmnn/bell.hpp"
#include "mmnn/errors.hpp"

namespace mmnn {

double modulus_of_continuity(const Signal& f, double delta, double grid_step) {
  if (!(delta >= 0.0)) throw DomainError("modulus: delta must be >= 0");
  if (!(grid_step > 0.0)) throw DomainError("modulus: grid step must be positive");
  if (delta == 0.0) return 0.0;

  const double a = f.a();
  const double b = f.b();
  const auto steps = static_cast<std::int64_t>(std::ceil((b - a) / grid_step));
  const auto window = static_cast<std::int64_t>(std::floor(delta / grid_step + 1e-12));

  // Sliding max/min over windows of `window` grid steps; the pairwise sup
  // equals the largest in-window spread.
  std::deque<std::pair<std::int64_t, double>> maxq, minq;
  double sup = 0.0;
  for (std::int64_t i = 0; i <= steps; ++i) {
    const double x = i == steps ? b : a + static_cast<double>(i) * grid_step;
    const double v = f(x);
    while (!maxq.empty() && maxq.back().second <= v) maxq.pop_back();
    maxq.emplace_back(i, v);
    while (!minq.empty() && minq.back().second >= v) minq.pop_back();
    minq.emplace_back(i, v);
    while (maxq.front().first < i - window) maxq.pop_front();
    while (minq.front().first < i - window) minq.pop_front();
    sup = std::max(sup, maxq.front().second - minq.front().second);
  }
  return sup;
}

double sup_error_bound(const BoundInputs& in, double omega_Delta,
                       double omega_delta) {
  if (in.n < 1) throw DomainError("sup_error_bound: n must be positive");
  if (!(in.delta_n > 0.0) || !(in.Delta_n > 0.0))
    throw DomainError("sup_error_bound: radii must be positive");
  if (!(in.alpha > 0.0)) throw DomainError("sup_error_bound: alpha must be positive");
  if (!(omega_Delta >= 0.0) || !(omega_delta >= 0.0))
    throw DomainError("sup_error_bound: moduli must be >= 0");
  if (std::isinf(in.constants.abs_moment1))
    throw NonIntegrable("averaging kernel has divergent first absolute moment");
  if (!(in.constants.unit_integral > 0.0) || !(in.constants.l1_norm > 0.0))
    throw DomainError("sup_error_bound: kernel constants must be positive");
  if (!(in.phi2 > 0.0))
    throw ZeroDenominator("bell weight at offset 2 vanishes");
  if (!(in.m_1plus_alpha >= 0.0))
    throw DomainError("sup_error_bound: negative generalized moment");

  const double dn = static_cast<double>(in.n);
  const double averaging =
      omega_Delta / in.constants.unit_integral *
      (in.constants.l1_norm + in.constants.abs_moment1 / (dn * in.Delta_n));
  const double tail =
      in.m_1plus_alpha / (in.phi2 * std::pow(dn * in.delta_n, 1.0 + in.alpha));
  return averaging + std::max(tail, omega_delta);
}

std::vector<ConvergenceRow> convergence_study(const OperatorConfig& base,
                                              const Signal& f,
                                              std::span<const std::int64_t> ns,
                                              double p, std::size_t grid_m,
                                              bool with_bound, int threads) {
  if (!(p >= 1.0)) throw DomainError("convergence_study: p must be >= 1");
  if (ns.empty()) throw DomainError("convergence_study: empty n list");

  const double a = f.a();
  const double b = f.b();
  const std::vector<double> grid = sample_grid(a, b, grid_m);
  std::vector<double> ref(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) ref[i] = f(grid[i]);

  // Bound ingredients do not depend on n; assemble them once.
  KernelConstants constants;
  double phi2 = 0.0;
  double moment = 0.0;
  double alpha = base.bell.sigmoid().alpha();
  if (with_bound) {
    if (!base.chi) throw DomainError("bound column needs an averaging kernel");
    constants = base.chi->constants();
    if (std::isinf(constants.abs_moment1))
      throw NonIntegrable("bound column needs a finite first absolute moment");
    phi2 = base.bell(2.0);
    moment = generalized_moment_stable(base.bell, 1.0 + alpha);
  }

  std::vector<ConvergenceRow> rows;
  rows.reserve(ns.size());
  for (std::int64_t n : ns) {
    OperatorConfig cfg = base;
    cfg.n = n;
    const std::vector<double> out = evaluate(cfg, f, grid, threads);
    ConvergenceRow row;
    row.n = n;
    row.p = p;
    double acc = 0.0;
    for (std::size_t i = 0; i < out.size(); ++i) {
      const double d = std::abs(out[i] - ref[i]);
      row.sup_error = std::max(row.sup_error, d);
      acc += std::pow(d, p);
    }
    row.lp_error = std::pow((b - a) * acc / static_cast<double>(out.size()), 1.0 / p);
    if (with_bound) {
      const double radius = 1.0 / std::sqrt(static_cast<double>(n));
      BoundInputs in;
      in.n = n;
      in.delta_n = radius;
      in.Delta_n = radius;
      in.alpha = alpha;
      in.constants = constants;
      in.phi2 = phi2;
      in.m_1plus_alpha = moment;
      // Grid moduli underestimate; inflate by a declared 5% safety factor.
      const double om_Delta = 1.05 * modulus_of_continuity(f, in.Delta_n);
      const double om_delta = 1.05 * modulus_of_continuity(f, in.delta_n);
      row.bound = sup_error_bound(in, om_Delta, om_delta);
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace mmnn
