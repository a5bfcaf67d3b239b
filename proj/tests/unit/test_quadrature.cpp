#include <doctest.h>

#include <cmath>
#include <numbers>

#include "mmnn/chi.hpp"
#include "mmnn/errors.hpp"
#include "mmnn/quadrature.hpp"
#include "mmnn/signal.hpp"
#include "oracle.hpp"

using namespace mmnn;

TEST_CASE("adaptive integrator on smooth closed forms") {
  auto sq = [](double t) { return t * t; };
  CHECK(integrate_adaptive(sq, 0.0, 1.0, 1e-12) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  auto s = [](double t) { return std::sin(t); };
  CHECK(integrate_adaptive(s, 0.0, std::numbers::pi, 1e-12) ==
        doctest::Approx(2.0).epsilon(1e-12));
  CHECK(integrate_adaptive(sq, 0.3, 0.3, 1e-12) == 0.0);
  CHECK_THROWS_AS((void)integrate_adaptive(sq, 1.0, 0.0, 1e-12), DomainError);
}

TEST_CASE("adaptive integrator gives up on a non-dyadic singularity") {
  auto f = [](double t) { return 1.0 / std::sqrt(std::abs(t - 0.3)); };
  CHECK_THROWS_AS((void)integrate_adaptive(f, 0.0, 1.0, 1e-12), QuadratureFailure);
}

TEST_CASE("kantorovich mean: identity and piecewise cells are exact") {
  QuadratureConfig q;
  Signal ident = Signal::sampled(0.0, 1.0, {0.0, 1.0}, Interp::linear);
  CHECK(kantorovich_mean(ident, 2, 0, q) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(kantorovich_mean(ident, 2, 1, q) == doctest::Approx(0.75).epsilon(1e-15));

  Signal f = Signal::piecewise(0.0, 1.0, {0.15, 0.4, 0.7},
                               {0.25, 0.72, 0.35, 0.55});
  // Cell [0.15, 0.155] lies inside the second branch (the jump point itself
  // has measure zero), cell [0.145, 0.15] inside the first.
  CHECK(kantorovich_mean(f, 200, 30, q) == doctest::Approx(0.72).epsilon(1e-14));
  CHECK(kantorovich_mean(f, 200, 29, q) == doctest::Approx(0.25).epsilon(1e-14));

  // A jump mid-cell splits the mean by overlap length.
  Signal h = Signal::piecewise(0.0, 1.0, {0.1525}, {0.25, 0.72});
  CHECK(kantorovich_mean(h, 200, 30, q) ==
        doctest::Approx(0.5 * 0.25 + 0.5 * 0.72).epsilon(1e-12));
}

TEST_CASE("kantorovich mean: sine closed form and adaptive agree") {
  QuadratureConfig q;
  QuadratureConfig qa;
  qa.mode = QuadratureConfig::Mode::adaptive;
  Signal g = Signal::sine(0.0, 1.0, 0.45, 0.25, 8.0 * std::numbers::pi);
  CHECK(kantorovich_mean(g, 200, 30, q) ==
        doctest::Approx(0.2907488339113834).epsilon(1e-13));
  CHECK(kantorovich_mean(g, 200, 30, qa) ==
        doctest::Approx(0.2907488339113834).epsilon(1e-9));
}

TEST_CASE("chi cell mass closed forms") {
  QuadratureConfig q;
  QuadratureConfig qa;
  qa.mode = QuadratureConfig::Mode::adaptive;
  auto hat = ChiKernel::hat();
  CHECK(chi_cell_mass(hat, 2, 0, 0.0, 1.0, q) == doctest::Approx(0.25).epsilon(1e-14));
  auto rat = ChiKernel::rational(1.0);
  CHECK(chi_cell_mass(rat, 2, 0, 0.0, 1.0, q) ==
        doctest::Approx(0.5 * std::atan(2.0)).epsilon(1e-14));
  CHECK(chi_cell_mass(rat, 2, 0, 0.0, 1.0, qa) ==
        doctest::Approx(0.5 * std::atan(2.0)).epsilon(1e-9));
  CHECK_THROWS_AS((void)chi_cell_mass(rat, 2, 2, 0.0, 1.0, q), DomainError);
  CHECK_THROWS_AS((void)chi_cell_mass(rat, 2, -1, 0.0, 1.0, q), DomainError);
}

TEST_CASE("chi weighted mean: hat closed forms on the identity") {
  QuadratureConfig q;
  Signal ident = Signal::sampled(0.0, 1.0, {0.0, 1.0}, Interp::linear);
  auto hat = ChiKernel::hat();
  CHECK(chi_weighted_mean(hat, ident, 2, 0, q) ==
        doctest::Approx(1.0 / 6.0).epsilon(1e-13));
  CHECK(chi_weighted_mean(hat, ident, 2, 1, q) ==
        doctest::Approx(0.5).epsilon(1e-13));
}

TEST_CASE("chi weighted mean: rational identity, all three modes agree") {
  Signal ident = Signal::sampled(0.0, 1.0, {0.0, 1.0}, Interp::linear);
  auto rat = ChiKernel::rational(1.0);
  // (ln 5 / 8) / (atan 2 / 2), integrating t/(1+4t^2) over [0,1].
  const double want = 0.363419540339798;
  for (auto mode : {QuadratureConfig::Mode::closed_form_preferred,
                    QuadratureConfig::Mode::composite,
                    QuadratureConfig::Mode::adaptive}) {
    QuadratureConfig q;
    q.mode = mode;
    CHECK(chi_weighted_mean(rat, ident, 2, 0, q) ==
          doctest::Approx(want).epsilon(1e-9));
  }
}

TEST_CASE("chi weighted mean: composite and adaptive agree on a sine") {
  Signal g = Signal::sine(0.0, 1.0, 0.45, 0.25, 8.0 * std::numbers::pi);
  auto hat = ChiKernel::hat();
  // Midpoint panels converge at h^2; 4096 per cell puts the rule well past
  // the 1e-8 comparison threshold for this curvature.
  QuadratureConfig qc;
  qc.mode = QuadratureConfig::Mode::composite;
  qc.panels_per_cell = 4096;
  QuadratureConfig qa;
  qa.mode = QuadratureConfig::Mode::adaptive;
  for (long long k : {0, 7, 24}) {
    double a = chi_weighted_mean(hat, g, 25, k, qc);
    double b = chi_weighted_mean(hat, g, 25, k, qa);
    CHECK(a == doctest::Approx(b).epsilon(1e-8));
  }
  // Default panel count still lands within the rule's own error envelope.
  QuadratureConfig qd;
  qd.mode = QuadratureConfig::Mode::composite;
  CHECK(chi_weighted_mean(hat, g, 25, 7, qd) ==
        doctest::Approx(chi_weighted_mean(hat, g, 25, 7, qa)).epsilon(1e-4));
}

TEST_CASE("chi weighted mean matches an independent Simpson transcription") {
  QuadratureConfig q;
  Signal f = Signal::piecewise(0.0, 1.0, {0.3, 0.6}, {0.9, 0.1, 0.5});
  oracle::Instance inst{0.0, 1.0, {0.3, 0.6}, {0.9, 0.1, 0.5}};
  auto rat = ChiKernel::rational(1.0);
  for (long long k : {0, 1, 3}) {
    double lib = chi_weighted_mean(rat, f, 4, k, q);
    double ref = oracle::coefficient(Family::maxmin_durrmeyer, inst, 4, k, rat);
    CHECK(lib == doctest::Approx(ref).epsilon(1e-10));
  }
}

TEST_CASE("durrmeyer machinery needs integer endpoints") {
  QuadratureConfig q;
  Signal f = Signal::piecewise(0.0, 0.5, {}, {0.3});
  auto hat = ChiKernel::hat();
  CHECK_THROWS_AS((void)chi_weighted_mean(hat, f, 4, 0, q), DomainError);
}
