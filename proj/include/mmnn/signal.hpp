#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <variant>
#include <vector>

namespace mmnn {

enum class Interp { step, linear };

struct SineWave {
  double offset = 0.0;
  double amplitude = 0.0;
  double angular_freq = 0.0;
};

// Right-closed branches: value[i] holds on (break[i-1], break[i]], the first
// branch includes the left endpoint.
struct PiecewiseConst {
  std::vector<double> breakpoints;  // strictly increasing, interior to (a, b)
  std::vector<double> values;       // breakpoints.size() + 1 entries
};

struct SampledValues {
  std::vector<double> values;  // on the uniform grid a + j*(b-a)/(m-1)
  Interp interp = Interp::step;
};

// One polynomial-degree-<=1 span of a signal: value(t) = a0 + a1*t on [t0, t1].
struct LinearPiece {
  double t0, t1, a0, a1;
};

/// A function on [a, b] with values in [0, 1].  Immutable after construction;
/// piecewise structure is precomputed so integration never reallocates.
class Signal {
 public:
  static Signal constant(double a, double b, double value);
  static Signal sine(double a, double b, double offset, double amplitude,
                     double angular_freq);
  static Signal piecewise(double a, double b, std::vector<double> breakpoints,
                          std::vector<double> values);
  static Signal sampled(double a, double b, std::vector<double> values,
                        Interp interp = Interp::step);

  double a() const { return a_; }
  double b() const { return b_; }

  // Point evaluation; DomainError outside [a, b] beyond a relative 1e-9 slack.
  double operator()(double x) const;

  const std::variant<SineWave, PiecewiseConst, SampledValues>& repr() const {
    return repr_;
  }
  bool is_closed_form() const {
    return std::holds_alternative<SineWave>(repr_);
  }
  // Empty for closed forms; otherwise covers [a, b] without gaps.
  std::span<const LinearPiece> pieces() const { return pieces_; }

 private:
  Signal(double a, double b, std::variant<SineWave, PiecewiseConst, SampledValues> r);

  double a_, b_;
  std::variant<SineWave, PiecewiseConst, SampledValues> repr_;
  std::vector<LinearPiece> pieces_;
};

/// The metric grid: m points x_j = a + j*(b-a)/(m-1), last pinned to b exactly.
std::vector<double> sample_grid(double a, double b, std::size_t m);

/// Affine range map used to bring file signals into [0, 1] and back.
struct AffineMap {
  double lo = 0.0;
  double hi = 1.0;
  double normalize(double v) const { return (v - lo) / (hi - lo); }
  double denormalize(double u) const { return lo + u * (hi - lo); }
};

// Maps samples onto [0, 1] against their own min/max; a constant sequence maps
// to all zeros with span 1 so the map stays invertible.
std::pair<std::vector<double>, AffineMap> normalize_unit(std::span<const double> samples);

struct NoiseSpec {
  enum class Kind { salt_pepper, gaussian };
  Kind kind = Kind::salt_pepper;
  // salt_pepper: corruption density p (p/2 to 1, p/2 to 0).
  // gaussian: standard deviation of the additive term, output clamped to [0,1].
  double amount = 0.05;
  std::uint64_t seed = 0;
};

std::vector<double> add_noise(std::span<const double> clean, const NoiseSpec& spec);

struct ErrorReport {
  double me = 0.0;   // max absolute deviation
  double mae = 0.0;  // mean absolute deviation
  double mse = 0.0;  // mean squared deviation
  std::size_t sample_count = 0;
};

ErrorReport error_report(std::span<const double> approx, std::span<const double> ref);
ErrorReport error_report(std::span<const double> approx, const Signal& ref,
                         std::span<const double> grid);

/// SplitMix64 stream; the pinned portable generator behind NoiseSpec.  Gaussian
/// deviates come from Box-Muller on consecutive 53-bit uniforms.  The exact
/// update and output functions are part of the reproducibility contract.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();
  double next_unit();      // [0, 1), 53-bit resolution
  double next_gaussian();  // standard normal

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace mmnn
