#include <doctest.h>

#include <cmath>

#include "mmnn/bell.hpp"
#include "mmnn/errors.hpp"

using namespace mmnn;

namespace {
BellKernel logistic_bell(double slope = 1.0, double scale = 1.0) {
  return BellKernel(Sigmoid(SigmoidKind::logistic, slope), scale);
}
}  // namespace

TEST_CASE("logistic bell frozen values") {
  BellKernel b = logistic_bell();
  CHECK(b(0.0) == doctest::Approx(0.2310585786300049).epsilon(1e-15));
  CHECK(b(2.0) == doctest::Approx(0.11075777409621423).epsilon(1e-15));
}

TEST_CASE("even, bounded by 1/2, nonincreasing away from zero") {
  for (auto kind : {SigmoidKind::logistic, SigmoidKind::tanh,
                    SigmoidKind::step, SigmoidKind::ramp}) {
    BellKernel b{Sigmoid(kind)};
    double prev = b(0.0);
    CHECK(prev <= 0.5);
    for (int i = 1; i <= 500; ++i) {
      double x = i * 0.01;
      CHECK(b(x) == b(-x));
      CHECK(b(x) <= prev + 1e-15);
      prev = b(x);
    }
  }
}

TEST_CASE("partition of unity over integer shifts") {
  // Smooth kernels have exponentially small tails beyond |k| = 60; compact
  // ones sum exactly.
  for (auto kind : {SigmoidKind::logistic, SigmoidKind::tanh,
                    SigmoidKind::step, SigmoidKind::ramp}) {
    BellKernel b{Sigmoid(kind)};
    for (double x : {0.0, 0.3, 0.5, 0.77}) {
      double sum = 0.0;
      for (int k = -60; k <= 60; ++k) sum += b(x - k);
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("compact support flags and radius") {
  CHECK(!logistic_bell().compact_support());
  BellKernel step_b{Sigmoid(SigmoidKind::step)};
  CHECK(step_b.compact_support());
  CHECK(step_b.support_radius() == doctest::Approx(1.5));
  CHECK(step_b(1.6) == 0.0);
  CHECK(step_b(1.4) > 0.0);
  BellKernel ramp_fast{Sigmoid(SigmoidKind::ramp, 2.0), 0.5};
  // radius = 1 + 1/(2*slope*scale)
  CHECK(ramp_fast.support_radius() == doctest::Approx(1.5));
  CHECK(ramp_fast(2.05) == 0.0);
}

TEST_CASE("scale stretches the kernel") {
  BellKernel wide = logistic_bell(1.0, 0.05);
  BellKernel unit = logistic_bell();
  // Same sigmoid sampled at s*(x+-1): value at x equals unscaled at argument
  // pair s x +- s, so the peak drops while the spread grows.
  CHECK(wide(0.0) < unit(0.0));
  CHECK(wide(40.0) > unit(40.0));
}

TEST_CASE("tail sup equals the edge value by monotonicity") {
  BellKernel b = logistic_bell();
  CHECK(phi_tail_sup(b, 100, 0.04) == b(4.0));
  CHECK(phi_tail_sup(b, 10, 1.0) == b(10.0));
}

TEST_CASE("cell-max picks the nearest admissible lattice point") {
  BellKernel b = logistic_bell();
  CHECK(phi_max_over_cells(b, 10, 0.52, 0, 9) == b(10 * 0.52 - 5));
  CHECK(phi_max_over_cells(b, 10, 0.0, 0, 9) == b(0.0));
  // Clamped at the range edge when the nearest integer falls outside.
  CHECK(phi_max_over_cells(b, 10, 1.0, 0, 9) == b(1.0));
}

TEST_CASE("cell-max rejects an empty-support window") {
  BellKernel step_b{Sigmoid(SigmoidKind::step)};  // support radius 1.5
  CHECK_THROWS_AS((void)phi_max_over_cells(step_b, 10, 1.0, 0, 5), ZeroDenominator);
}

TEST_CASE("generalized moment: ramp closed form 9/32") {
  // sup of phi_ramp(u)*|u| sits at u = 3/4, phi = 3/8 there.
  BellKernel b{Sigmoid(SigmoidKind::ramp)};
  CHECK(generalized_moment(b, 1.0, 8) == doctest::Approx(9.0 / 32.0).epsilon(1e-12));
  CHECK(generalized_moment_stable(b, 1.0) == doctest::Approx(9.0 / 32.0).epsilon(1e-12));
}

TEST_CASE("generalized moment: beta 0 recovers the peak value") {
  BellKernel b = logistic_bell();
  CHECK(generalized_moment(b, 0.0, 32) ==
        doctest::Approx(0.2310585786300049).epsilon(1e-12));
}

TEST_CASE("stable moment agrees with a wide fixed truncation") {
  BellKernel b = logistic_bell();
  double wide = generalized_moment(b, 2.0, 512);
  CHECK(generalized_moment_stable(b, 2.0) == doctest::Approx(wide).epsilon(1e-9));
}
