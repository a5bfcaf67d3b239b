#include "mmnn/chi.hpp"

#include <cmath>
#include <limits>

#include "mmnn/errors.hpp"

namespace mmnn {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kInf = std::numeric_limits<double>::infinity();
}  // namespace

ChiKernel::ChiKernel(ChiKind kind, double c)
    : kind_(kind), c_(c), sqrt_c_(kind == ChiKind::rational ? std::sqrt(c) : 0.0) {}

ChiKernel ChiKernel::rational(double c) {
  if (!(c > 0.0)) throw DomainError("rational kernel needs c > 0");
  return ChiKernel(ChiKind::rational, c);
}

ChiKernel ChiKernel::hat() { return ChiKernel(ChiKind::hat, 0.0); }

double ChiKernel::operator()(double x) const {
  if (kind_ == ChiKind::rational) return 1.0 / (1.0 + c_ * x * x);
  const double ax = std::abs(x);
  return ax < 1.0 ? 1.0 - ax : 0.0;
}

double ChiKernel::antiderivative(double u) const {
  if (kind_ == ChiKind::rational) return std::atan(sqrt_c_ * u) / sqrt_c_;
  // Odd antiderivative of the hat, saturating at +-1/2 outside the support.
  const double au = std::abs(u);
  const double v = au < 1.0 ? au - 0.5 * au * au : 0.5;
  return u < 0.0 ? -v : v;
}

double ChiKernel::moment1_antiderivative(double u) const {
  if (kind_ == ChiKind::rational) return std::log1p(c_ * u * u) / (2.0 * c_);
  // Integrand t*chi(t) is odd, so the antiderivative from 0 is even in u.
  const double au = std::abs(u);
  if (au >= 1.0) return 1.0 / 6.0;
  return 0.5 * au * au - au * au * au / 3.0;
}

double ChiKernel::support_radius() const {
  return kind_ == ChiKind::hat ? 1.0 : kInf;
}

namespace {

// sum_{|k| <= radius} chi(t - k) plus a closed-form completion of both tails
// (midpoint-rule swap of the remaining sum for the integral beyond radius+1/2;
// the heavy rational tail makes plain truncation hopeless at 1e-9).
double lattice_sum(const ChiKernel& chi, double t, std::int64_t radius) {
  double s = 0.0;
  for (std::int64_t k = -radius; k <= radius; ++k) s += chi(t - static_cast<double>(k));
  const double r = static_cast<double>(radius) + 0.5;
  const double half_l1 = chi.antiderivative(kInf);
  s += half_l1 - chi.antiderivative(t + r);   // right tail k > radius
  s += half_l1 + chi.antiderivative(t - r);   // left tail k < -radius
  return s;
}

double discrete_moment0(const ChiKernel& chi, std::int64_t trunc, double grid_step) {
  const auto points = static_cast<std::int64_t>(std::floor(1.0 / grid_step));
  std::int64_t radius = trunc < 1 ? 1 : trunc;
  double prev = -1.0;
  for (int round = 0; round < 12; ++round) {
    double sup = 0.0;
    for (std::int64_t i = 0; i < points; ++i) {
      const double s = lattice_sum(chi, static_cast<double>(i) * grid_step, radius);
      if (s > sup) sup = s;
    }
    if (prev >= 0.0 && std::abs(sup - prev) <= 1e-9 * sup) return sup;
    prev = sup;
    if (chi.compact_support()) return sup;  // tails are exactly zero
    radius *= 2;
  }
  return prev;
}

}  // namespace

KernelConstants ChiKernel::constants(std::int64_t trunc, double grid_step) const {
  KernelConstants k;
  if (kind_ == ChiKind::hat) {
    k.unit_integral = 0.5;
    k.l1_norm = 1.0;
    k.discrete_moment0 = 1.0;   // integer translates of the hat sum to 1
    k.abs_moment1 = 1.0 / 3.0;
    return k;
  }
  k.unit_integral = std::atan(sqrt_c_) / sqrt_c_;
  k.l1_norm = kPi / sqrt_c_;
  k.discrete_moment0 = discrete_moment0(*this, trunc, grid_step);
  k.abs_moment1 = kInf;  // integral of |u|/(1+c u^2) diverges logarithmically
  return k;
}

KernelConstants chi_constants(const ChiKernel& chi, std::int64_t trunc,
                              double grid_step) {
  return chi.constants(trunc, grid_step);
}

ChiKind chi_kind_from_string(const std::string& name) {
  if (name == "rational") return ChiKind::rational;
  if (name == "hat") return ChiKind::hat;
  throw ParseError("unknown averaging kernel kind: " + name);
}

std::string to_string(ChiKind kind) {
  return kind == ChiKind::rational ? "rational" : "hat";
}

}  // namespace mmnn
