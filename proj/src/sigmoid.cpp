#include "mmnn/sigmoid.hpp"

#include <cmath>

#include "mmnn/errors.hpp"

namespace mmnn {

bool sigmoid_is_smooth(SigmoidKind kind) {
  return kind == SigmoidKind::logistic || kind == SigmoidKind::tanh;
}

double default_alpha(SigmoidKind kind) {
  return sigmoid_is_smooth(kind) ? 1.0 : 5.0;
}

SigmoidKind sigmoid_kind_from_string(const std::string& name) {
  if (name == "logistic") return SigmoidKind::logistic;
  if (name == "tanh") return SigmoidKind::tanh;
  if (name == "step") return SigmoidKind::step;
  if (name == "ramp") return SigmoidKind::ramp;
  throw ParseError("unknown sigmoid kind: " + name);
}

std::string to_string(SigmoidKind kind) {
  switch (kind) {
    case SigmoidKind::logistic: return "logistic";
    case SigmoidKind::tanh: return "tanh";
    case SigmoidKind::step: return "step";
    case SigmoidKind::ramp: return "ramp";
  }
  return "?";
}

Sigmoid::Sigmoid(SigmoidKind kind, double slope, double alpha)
    : kind_(kind), slope_(slope), alpha_(alpha > 0.0 ? alpha : default_alpha(kind)) {
  if (!(slope_ > 0.0)) throw DomainError("sigmoid slope must be positive");
}

namespace {

// Branching on the sign keeps exp() bounded and the identity
// sigma(x) + sigma(-x) = 1 exact to rounding.
double logistic(double y) {
  if (y >= 0.0) return 1.0 / (1.0 + std::exp(-y));
  const double e = std::exp(y);
  return e / (1.0 + e);
}

}  // namespace

double Sigmoid::operator()(double x) const {
  const double y = slope_ * x;
  switch (kind_) {
    case SigmoidKind::logistic:
      return logistic(y);
    case SigmoidKind::tanh:
      return 0.5 * (std::tanh(y) + 1.0);
    case SigmoidKind::step:
      if (y < -0.5) return 0.0;
      if (y > 0.5) return 1.0;
      return 0.5;
    case SigmoidKind::ramp:
      if (y < -0.5) return 0.0;
      if (y > 0.5) return 1.0;
      return y + 0.5;
  }
  return 0.0;
}

}  // namespace mmnn
