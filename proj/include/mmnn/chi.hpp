#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace mmnn {

enum class ChiKind { rational, hat };

/// Constants attached to an averaging kernel.  abs_moment1 may be the +inf
/// marker (rational kernels); consumers that need it finite must check.
struct KernelConstants {
  double unit_integral = 0.0;     // integral of chi over [0, 1]
  double l1_norm = 0.0;           // integral of chi over the whole line
  double discrete_moment0 = 0.0;  // sup_t sum_k chi(t - k)
  double abs_moment1 = 0.0;       // integral of chi(u)|u| du, +inf if divergent
  // Optional per-beta generalized moments of an associated bell, filled by
  // callers that report them together (CLI `moments`).
  std::map<double, double> generalized_moments;
};

/// Even, bounded, nonincreasing-on-[0,inf) averaging kernel with positive
/// integral.  Two shapes: rational 1/(1 + c x^2) and hat max(0, 1 - |x|).
class ChiKernel {
 public:
  static ChiKernel rational(double c);
  static ChiKernel hat();

  double operator()(double x) const;

  // X0(u) = integral of chi over [0, u]; closed form for both shapes.
  double antiderivative(double u) const;
  // X1(u) = integral of t*chi(t) over [0, u]; even in u.
  double moment1_antiderivative(double u) const;

  bool compact_support() const { return kind_ == ChiKind::hat; }
  // +inf for the rational shape.
  double support_radius() const;

  ChiKind kind() const { return kind_; }
  double c() const { return c_; }

  KernelConstants constants(std::int64_t trunc = 1024, double grid_step = 1e-3) const;

 private:
  ChiKernel(ChiKind kind, double c);

  ChiKind kind_;
  double c_;        // rational curvature; unused for hat
  double sqrt_c_;   // cached
};

KernelConstants chi_constants(const ChiKernel& chi, std::int64_t trunc = 1024,
                              double grid_step = 1e-3);

ChiKind chi_kind_from_string(const std::string& name);
std::string to_string(ChiKind kind);

}  // namespace mmnn
