#pragma once

#include <string>

namespace mmnn {

enum class SigmoidKind { logistic, tanh, step, ramp };

bool sigmoid_is_smooth(SigmoidKind kind);

// Declared decay exponent used by tail estimates: 1 for the smooth kinds,
// 5 for the compactly supported ones (any exponent is admissible there).
double default_alpha(SigmoidKind kind);

SigmoidKind sigmoid_kind_from_string(const std::string& name);
std::string to_string(SigmoidKind kind);

/// Nondecreasing activation with limits 0 at -inf and 1 at +inf, evaluated as
/// sigma(slope * x).  Satisfies sigma(x) + sigma(-x) = 1.
class Sigmoid {
 public:
  // alpha <= 0 selects the kind's default exponent.
  explicit Sigmoid(SigmoidKind kind, double slope = 1.0, double alpha = 0.0);

  double operator()(double x) const;

  SigmoidKind kind() const { return kind_; }
  double slope() const { return slope_; }
  double alpha() const { return alpha_; }

 private:
  SigmoidKind kind_;
  double slope_;
  double alpha_;
};

}  // namespace mmnn
