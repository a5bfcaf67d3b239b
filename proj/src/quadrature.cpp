#include "mmnn/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "mmnn/errors.hpp"

namespace mmnn {

namespace {

constexpr int kMaxDepth = 48;

struct SimpsonState {
  const std::function<double(double)>& g;

  double refine(double lo, double hi, double flo, double fm, double fhi,
                double whole, double tol, int depth) const {
    const double m = 0.5 * (lo + hi);
    const double lm = 0.5 * (lo + m);
    const double rm = 0.5 * (m + hi);
    const double flm = g(lm);
    const double frm = g(rm);
    const double left = (m - lo) / 6.0 * (flo + 4.0 * flm + fm);
    const double right = (hi - m) / 6.0 * (fm + 4.0 * frm + fhi);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    if (depth >= kMaxDepth)
      throw QuadratureFailure("adaptive integration: depth limit exhausted");
    return refine(lo, m, flo, flm, fm, left, 0.5 * tol, depth + 1) +
           refine(m, hi, fm, frm, fhi, right, 0.5 * tol, depth + 1);
  }
};

// Integer cell index helpers with a small nudge against products like
// 0.1 * 30 evaluating just above the integer they represent.
std::int64_t ceil_index(double v) {
  return static_cast<std::int64_t>(std::ceil(v - 1e-9));
}
std::int64_t floor_index(double v) {
  return static_cast<std::int64_t>(std::floor(v + 1e-9));
}

void require_integer_domain(const Signal& f, std::int64_t& ia, std::int64_t& ib) {
  const double ra = std::nearbyint(f.a());
  const double rb = std::nearbyint(f.b());
  if (std::abs(f.a() - ra) > 1e-9 || std::abs(f.b() - rb) > 1e-9)
    throw DomainError("kernel-averaged coefficients need integer domain endpoints");
  ia = static_cast<std::int64_t>(ra);
  ib = static_cast<std::int64_t>(rb);
}

// Exact integral of chi(n t - k) * f(t) over the signal's pieces, in units of
// 1/n (the caller divides by the mass in the same units, so no 1/n appears).
double piecewise_weighted_units(const ChiKernel& chi, const Signal& f,
                                std::int64_t n, std::int64_t k) {
  const double dn = static_cast<double>(n);
  const double dk = static_cast<double>(k);
  const auto pieces = f.pieces();
  double acc = 0.0;
  double x0_left = chi.antiderivative(dn * pieces.front().t0 - dk);
  double x1_left = 0.0;
  bool x1_valid = false;
  for (const auto& pc : pieces) {
    const double u1 = dn * pc.t1 - dk;
    const double x0_right = chi.antiderivative(u1);
    if (pc.a1 == 0.0) {
      acc += pc.a0 * (x0_right - x0_left);
      x1_valid = false;
    } else {
      // f(t) = a0 + a1 t with t = (u + k)/n:
      //   contribution = (a0 + a1 k/n) dX0 + (a1/n) dX1.
      if (!x1_valid) x1_left = chi.moment1_antiderivative(dn * pc.t0 - dk);
      const double x1_right = chi.moment1_antiderivative(u1);
      acc += (pc.a0 + pc.a1 * dk / dn) * (x0_right - x0_left) +
             pc.a1 / dn * (x1_right - x1_left);
      x1_left = x1_right;
      x1_valid = true;
    }
    x0_left = x0_right;
  }
  return acc;
}

// Midpoint panels per lattice cell, restricted to the kernel support when it
// is compact.  Cell-aligned panels keep the hat kink on panel boundaries.
double composite_weighted_units(const ChiKernel& chi, const Signal& f,
                                std::int64_t n, std::int64_t k, int panels) {
  if (panels < 1) throw DomainError("composite quadrature needs >= 1 panel");
  const double dn = static_cast<double>(n);
  std::int64_t j_lo = ceil_index(dn * f.a());
  std::int64_t j_hi = floor_index(dn * f.b()) - 1;
  if (chi.compact_support()) {
    const auto r = static_cast<std::int64_t>(std::ceil(chi.support_radius()));
    j_lo = std::max(j_lo, k - r);
    j_hi = std::min(j_hi, k + r - 1);
  }
  double acc = 0.0;
  const double pw = 1.0 / static_cast<double>(panels);
  for (std::int64_t j = j_lo; j <= j_hi; ++j) {
    double cell = 0.0;
    for (int p = 0; p < panels; ++p) {
      const double u = static_cast<double>(j - k) + (p + 0.5) * pw;
      const double t = (u + static_cast<double>(k)) / dn;
      cell += chi(u) * f(std::clamp(t, f.a(), f.b()));
    }
    acc += cell * pw;
  }
  return acc;
}

// Adaptive path: split at the signal's own breakpoints plus the kernel peak
// and support edges, so the engine never has to discover narrow features.
double adaptive_weighted(const ChiKernel& chi, const Signal& f, std::int64_t n,
                         std::int64_t k, double tol) {
  const double dn = static_cast<double>(n);
  std::vector<double> cuts{f.a(), f.b()};
  for (const auto& pc : f.pieces()) cuts.push_back(pc.t1);
  const double peak = static_cast<double>(k) / dn;
  cuts.push_back(peak);
  if (chi.compact_support()) {
    cuts.push_back((static_cast<double>(k) - chi.support_radius()) / dn);
    cuts.push_back((static_cast<double>(k) + chi.support_radius()) / dn);
  }
  std::sort(cuts.begin(), cuts.end());
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = std::clamp(cuts[i], f.a(), f.b());
    const double hi = std::clamp(cuts[i + 1], f.a(), f.b());
    if (hi <= lo) continue;
    // Branches are right-closed, so the value at lo belongs to the previous
    // segment; nudging one ulp keeps every sample on this segment's branch.
    auto g = [&, lo, hi](double t) {
      if (t <= lo) t = std::nextafter(lo, hi);
      return chi(dn * t - static_cast<double>(k)) * f(t);
    };
    acc += integrate_adaptive(g, lo, hi, tol);
  }
  return acc;
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& g, double lo,
                          double hi, double tol) {
  if (!(hi >= lo)) throw DomainError("integrate_adaptive: reversed interval");
  if (hi == lo) return 0.0;
  if (!(tol >= 0.0)) throw DomainError("integrate_adaptive: negative tolerance");
  const double m = 0.5 * (lo + hi);
  const double flo = g(lo);
  const double fm = g(m);
  const double fhi = g(hi);
  const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fm + fhi);
  return SimpsonState{g}.refine(lo, hi, flo, fm, fhi, whole, tol, 0);
}

double chi_cell_mass(const ChiKernel& chi, std::int64_t n, std::int64_t k,
                     std::int64_t a, std::int64_t b, const QuadratureConfig& q) {
  if (n < 1) throw DomainError("chi_cell_mass: n must be positive");
  if (!(a < b)) throw DomainError("chi_cell_mass: needs a < b");
  if (k < n * a || k > n * b - 1)
    throw DomainError("chi_cell_mass: cell index outside [na, nb-1]");
  const double dn = static_cast<double>(n);
  const double dk = static_cast<double>(k);
  if (q.mode == QuadratureConfig::Mode::adaptive) {
    auto g = [&](double t) { return chi(dn * t - dk); };
    const double peak = dk / dn;
    double acc = integrate_adaptive(g, static_cast<double>(a), peak, q.tol);
    acc += integrate_adaptive(g, peak, static_cast<double>(b), q.tol);
    return acc;
  }
  return (chi.antiderivative(dn * static_cast<double>(b) - dk) -
          chi.antiderivative(dn * static_cast<double>(a) - dk)) /
         dn;
}

double chi_weighted_mean(const ChiKernel& chi, const Signal& f, std::int64_t n,
                         std::int64_t k, const QuadratureConfig& q) {
  if (n < 1) throw DomainError("chi_weighted_mean: n must be positive");
  std::int64_t ia = 0, ib = 0;
  require_integer_domain(f, ia, ib);
  if (k < n * ia || k > n * ib - 1)
    throw DomainError("chi_weighted_mean: cell index outside [na, nb-1]");

  if (q.mode == QuadratureConfig::Mode::adaptive) {
    const double mass = chi_cell_mass(chi, n, k, ia, ib, q);
    return adaptive_weighted(chi, f, n, k, q.tol) / mass;
  }

  const double dn = static_cast<double>(n);
  const double dk = static_cast<double>(k);
  const double mass_units = chi.antiderivative(dn * static_cast<double>(ib) - dk) -
                            chi.antiderivative(dn * static_cast<double>(ia) - dk);
  if (!(mass_units > 0.0))
    throw ZeroDenominator("chi translate carries no mass over the domain");

  if (!f.pieces().empty() && q.mode == QuadratureConfig::Mode::closed_form_preferred)
    return piecewise_weighted_units(chi, f, n, k) / mass_units;

  if (!f.pieces().empty() && q.mode == QuadratureConfig::Mode::composite) {
    // Piecewise representations still integrate exactly; composite only
    // matters for closed forms.
    return piecewise_weighted_units(chi, f, n, k) / mass_units;
  }

  return composite_weighted_units(chi, f, n, k, q.panels_per_cell) / mass_units;
}

double kantorovich_mean(const Signal& f, std::int64_t n, std::int64_t k,
                        const QuadratureConfig& q) {
  if (n < 1) throw DomainError("kantorovich_mean: n must be positive");
  const double dn = static_cast<double>(n);
  if (k < ceil_index(dn * f.a()) || k > floor_index(dn * f.b()) - 1)
    throw DomainError("kantorovich_mean: cell outside the domain");
  const double lo = std::max(static_cast<double>(k) / dn, f.a());
  const double hi = std::min(static_cast<double>(k + 1) / dn, f.b());

  if (q.mode == QuadratureConfig::Mode::adaptive) {
    std::vector<double> cuts{lo, hi};
    for (const auto& pc : f.pieces())
      if (pc.t1 > lo && pc.t1 < hi) cuts.push_back(pc.t1);
    std::sort(cuts.begin(), cuts.end());
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      const double s0 = cuts[i];
      const double s1 = cuts[i + 1];
      // Same one-ulp nudge as the weighted path: keep the left endpoint on
      // the branch owning this segment's interior.
      auto g = [&, s0, s1](double t) {
        if (t <= s0) t = std::nextafter(s0, s1);
        return f(t);
      };
      acc += integrate_adaptive(g, s0, s1, q.tol);
    }
    return dn * acc;
  }

  if (!f.pieces().empty()) {
    const auto pieces = f.pieces();
    // First piece whose right edge exceeds the cell start.
    auto it = std::upper_bound(
        pieces.begin(), pieces.end(), lo,
        [](double v, const LinearPiece& pc) { return v < pc.t1; });
    double acc = 0.0;
    for (; it != pieces.end() && it->t0 < hi; ++it) {
      const double d0 = std::max(lo, it->t0);
      const double d1 = std::min(hi, it->t1);
      if (d1 <= d0) continue;
      acc += it->a0 * (d1 - d0) + 0.5 * it->a1 * (d1 * d1 - d0 * d0);
    }
    return dn * acc;
  }

  const auto& s = std::get<SineWave>(f.repr());
  auto anti = [&](double t) {
    if (s.angular_freq == 0.0) return s.offset * t;
    return s.offset * t - s.amplitude / s.angular_freq * std::cos(s.angular_freq * t);
  };
  return dn * (anti(hi) - anti(lo));
}

}  // namespace mmnn
