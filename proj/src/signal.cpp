#include "mmnn/signal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mmnn/errors.hpp"

namespace mmnn {

namespace {

constexpr double kTwoPi = 6.28318530717958647692;

void require_unit(double v, const char* what) {
  if (!(v >= 0.0 && v <= 1.0))
    throw DomainError(std::string(what) + " outside [0, 1]");
}

}  // namespace

Signal::Signal(double a, double b,
               std::variant<SineWave, PiecewiseConst, SampledValues> r)
    : a_(a), b_(b), repr_(std::move(r)) {
  if (!(a_ < b_)) throw DomainError("signal domain needs a < b");

  if (const auto* s = std::get_if<SineWave>(&repr_)) {
    require_unit(s->offset - std::abs(s->amplitude), "sine lower envelope");
    require_unit(s->offset + std::abs(s->amplitude), "sine upper envelope");
    return;
  }

  if (const auto* p = std::get_if<PiecewiseConst>(&repr_)) {
    if (p->values.size() != p->breakpoints.size() + 1)
      throw DomainError("piecewise signal needs breakpoints+1 values");
    for (double v : p->values) require_unit(v, "piecewise value");
    double prev = a_;
    for (double t : p->breakpoints) {
      if (!(t > prev && t < b_))
        throw DomainError("breakpoints must increase strictly inside (a, b)");
      prev = t;
    }
    pieces_.reserve(p->values.size());
    double left = a_;
    for (std::size_t i = 0; i < p->values.size(); ++i) {
      const double right = i < p->breakpoints.size() ? p->breakpoints[i] : b_;
      pieces_.push_back({left, right, p->values[i], 0.0});
      left = right;
    }
    return;
  }

  const auto& s = std::get<SampledValues>(repr_);
  if (s.values.size() < 2) throw DomainError("sampled signal needs at least 2 values");
  for (double v : s.values) require_unit(v, "sample");
  const std::size_t m = s.values.size();
  const double h = (b_ - a_) / static_cast<double>(m - 1);
  pieces_.reserve(m - 1);
  for (std::size_t j = 0; j + 1 < m; ++j) {
    const double t0 = a_ + static_cast<double>(j) * h;
    const double t1 = j + 2 == m ? b_ : a_ + static_cast<double>(j + 1) * h;
    if (s.interp == Interp::step) {
      pieces_.push_back({t0, t1, s.values[j], 0.0});
    } else {
      const double a1 = (s.values[j + 1] - s.values[j]) / (t1 - t0);
      pieces_.push_back({t0, t1, s.values[j] - a1 * t0, a1});
    }
  }
}

Signal Signal::constant(double a, double b, double value) {
  return piecewise(a, b, {}, {value});
}

Signal Signal::sine(double a, double b, double offset, double amplitude,
                    double angular_freq) {
  return Signal(a, b, SineWave{offset, amplitude, angular_freq});
}

Signal Signal::piecewise(double a, double b, std::vector<double> breakpoints,
                         std::vector<double> values) {
  return Signal(a, b, PiecewiseConst{std::move(breakpoints), std::move(values)});
}

Signal Signal::sampled(double a, double b, std::vector<double> values, Interp interp) {
  return Signal(a, b, SampledValues{std::move(values), interp});
}

double Signal::operator()(double x) const {
  const double slack = 1e-9 * (b_ - a_);
  if (x < a_ - slack || x > b_ + slack)
    throw DomainError("signal evaluated outside its domain");
  x = std::clamp(x, a_, b_);

  if (const auto* s = std::get_if<SineWave>(&repr_)) {
    const double v = s->offset + s->amplitude * std::sin(s->angular_freq * x);
    return std::clamp(v, 0.0, 1.0);
  }

  if (const auto* p = std::get_if<PiecewiseConst>(&repr_)) {
    // Right-closed branches: index = number of breakpoints strictly below x.
    const auto it = std::lower_bound(p->breakpoints.begin(), p->breakpoints.end(), x);
    return p->values[static_cast<std::size_t>(it - p->breakpoints.begin())];
  }

  const auto& s = std::get<SampledValues>(repr_);
  const std::size_t m = s.values.size();
  const double h = (b_ - a_) / static_cast<double>(m - 1);
  auto j = static_cast<std::int64_t>(std::floor((x - a_) / h));
  // Round-off guard: keep x within its own piece boundaries.
  while (j > 0 && x < a_ + static_cast<double>(j) * h) --j;
  while (j + 2 < static_cast<std::int64_t>(m) &&
         x >= a_ + static_cast<double>(j + 1) * h)
    ++j;
  j = std::clamp<std::int64_t>(j, 0, static_cast<std::int64_t>(m) - 2);
  if (s.interp == Interp::step)
    return x >= b_ ? s.values[m - 1] : s.values[static_cast<std::size_t>(j)];
  const auto& piece = pieces_[static_cast<std::size_t>(j)];
  return std::clamp(piece.a0 + piece.a1 * x, 0.0, 1.0);
}

std::vector<double> sample_grid(double a, double b, std::size_t m) {
  if (m < 2) throw DomainError("sample_grid needs at least 2 points");
  if (!(a < b)) throw DomainError("sample_grid needs a < b");
  std::vector<double> xs(m);
  const double h = (b - a) / static_cast<double>(m - 1);
  for (std::size_t j = 0; j < m; ++j) xs[j] = a + static_cast<double>(j) * h;
  xs[m - 1] = b;  // pin the endpoint against accumulated rounding
  return xs;
}

std::pair<std::vector<double>, AffineMap> normalize_unit(std::span<const double> samples) {
  if (samples.empty()) throw DomainError("normalize_unit: empty input");
  double lo = samples[0], hi = samples[0];
  for (double v : samples) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (hi <= lo) hi = lo + 1.0;  // constant input: identity span, all map to 0
  const AffineMap map{lo, hi};
  std::vector<double> out(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) out[i] = map.normalize(samples[i]);
  return {std::move(out), map};
}

std::uint64_t SplitMix64::next() {
  state_ += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

double SplitMix64::next_unit() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double SplitMix64::next_gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  const double u1 = next_unit();
  const double u2 = next_unit();
  // 1 - u1 lies in (0, 1], so the log is finite without rejection.
  const double r = std::sqrt(-2.0 * std::log(1.0 - u1));
  const double t = kTwoPi * u2;
  spare_ = r * std::sin(t);
  have_spare_ = true;
  return r * std::cos(t);
}

std::vector<double> add_noise(std::span<const double> clean, const NoiseSpec& spec) {
  if (!(spec.amount >= 0.0)) throw DomainError("noise amount must be >= 0");
  if (spec.kind == NoiseSpec::Kind::salt_pepper && spec.amount > 1.0)
    throw DomainError("salt/pepper density must be <= 1");
  SplitMix64 rng(spec.seed);
  std::vector<double> out(clean.begin(), clean.end());
  if (spec.kind == NoiseSpec::Kind::salt_pepper) {
    const double half = 0.5 * spec.amount;
    for (double& v : out) {
      const double u = rng.next_unit();
      if (u < half)
        v = 1.0;
      else if (u < spec.amount)
        v = 0.0;
    }
  } else {
    for (double& v : out)
      v = std::clamp(v + spec.amount * rng.next_gaussian(), 0.0, 1.0);
  }
  return out;
}

ErrorReport error_report(std::span<const double> approx, std::span<const double> ref) {
  if (approx.size() != ref.size())
    throw LengthMismatch("error_report: sequence lengths differ");
  if (approx.empty()) throw LengthMismatch("error_report: empty sequences");
  ErrorReport r;
  r.sample_count = approx.size();
  double sum_abs = 0.0, sum_sq = 0.0;
  for (std::size_t i = 0; i < approx.size(); ++i) {
    const double d = std::abs(approx[i] - ref[i]);
    r.me = std::max(r.me, d);
    sum_abs += d;
    sum_sq += d * d;
  }
  r.mae = sum_abs / static_cast<double>(approx.size());
  r.mse = sum_sq / static_cast<double>(approx.size());
  return r;
}

ErrorReport error_report(std::span<const double> approx, const Signal& ref,
                         std::span<const double> grid) {
  if (approx.size() != grid.size())
    throw LengthMismatch("error_report: grid length differs from values");
  std::vector<double> rv(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) rv[i] = ref(grid[i]);
  return error_report(approx, rv);
}

}  // namespace mmnn
