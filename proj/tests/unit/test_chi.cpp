#include <doctest.h>

#include <cmath>
#include <limits>

#include "mmnn/chi.hpp"
#include "mmnn/errors.hpp"

using namespace mmnn;

TEST_CASE("rational kernel values and antiderivatives") {
  auto chi = ChiKernel::rational(1.0);
  CHECK(chi(0.0) == 1.0);
  CHECK(chi(2.0) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(chi.antiderivative(1.0) == doctest::Approx(std::atan(1.0)).epsilon(1e-15));
  // X0 is odd, X1 is even.
  for (double u : {0.3, 1.7, 9.0}) {
    CHECK(chi.antiderivative(-u) == -chi.antiderivative(u));
    CHECK(chi.moment1_antiderivative(-u) == chi.moment1_antiderivative(u));
  }
  // d/du of the |u|-weighted antiderivative is chi(u)*|u|.
  for (double u : {0.4, 2.2}) {
    double h = 1e-6;
    double fd = (chi.moment1_antiderivative(u + h) -
                 chi.moment1_antiderivative(u - h)) / (2.0 * h);
    CHECK(fd == doctest::Approx(chi(u) * u).epsilon(1e-8));
  }
}

TEST_CASE("hat kernel closed forms") {
  auto hat = ChiKernel::hat();
  CHECK(hat(0.0) == 1.0);
  CHECK(hat(0.5) == 0.5);
  CHECK(hat(1.0) == 0.0);
  CHECK(hat(1.2) == 0.0);
  CHECK(hat.compact_support());
  CHECK(hat.support_radius() == 1.0);
  // X0 saturates at +-1/2 past the support, X1 at 1/6.
  CHECK(hat.antiderivative(1.0) == 0.5);
  CHECK(hat.antiderivative(55.0) == 0.5);
  CHECK(hat.antiderivative(-55.0) == -0.5);
  CHECK(hat.moment1_antiderivative(3.0) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(hat.antiderivative(0.5) == doctest::Approx(0.375).epsilon(1e-15));
}

TEST_CASE("hat constants are exact") {
  auto k = chi_constants(ChiKernel::hat());
  CHECK(k.unit_integral == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(k.l1_norm == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(k.discrete_moment0 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(k.abs_moment1 == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("rational c=1 constants against closed forms") {
  auto k = chi_constants(ChiKernel::rational(1.0));
  CHECK(k.unit_integral == doctest::Approx(std::atan(1.0)).epsilon(1e-14));
  CHECK(k.l1_norm == doctest::Approx(3.141592653589793).epsilon(1e-14));
  // Lattice sum of 1/(1+t^2) shifted: sup over t equals pi*coth(pi) at t = 0.
  CHECK(k.discrete_moment0 == doctest::Approx(3.153348094937162).epsilon(1e-9));
  CHECK(std::isinf(k.abs_moment1));  // integrand ~ 1/|u| in the tails
}

TEST_CASE("rational c=0.001 frozen constants") {
  auto k = chi_constants(ChiKernel::rational(0.001));
  // atan(sqrt(c))/sqrt(c) and pi/sqrt(c).
  CHECK(k.unit_integral == doctest::Approx(0.9996668665239207).epsilon(1e-12));
  CHECK(k.l1_norm == doctest::Approx(99.34588265796101).epsilon(1e-12));
}

TEST_CASE("invalid rational parameter") {
  CHECK_THROWS_AS((void)ChiKernel::rational(0.0), DomainError);
  CHECK_THROWS_AS((void)ChiKernel::rational(-1.0), DomainError);
}

TEST_CASE("kind string round trip") {
  CHECK(to_string(ChiKind::rational) == "rational");
  CHECK(to_string(ChiKind::hat) == "hat");
  CHECK(chi_kind_from_string("hat") == ChiKind::hat);
  CHECK_THROWS_AS((void)chi_kind_from_string("box"), ParseError);
}
