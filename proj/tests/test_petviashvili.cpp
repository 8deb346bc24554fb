#include <doctest.h>

#include <cmath>

#include "nlwave/petviashvili.hpp"

using namespace nlwave;

namespace {

// Closed-form IBq solitary wave: c^2 = 7/6, phi = (1/4) sech^2(x/sqrt(28)).
const Real kIbqSpeed = std::sqrt(7.0 / 6.0);

PhysicalField ibq_profile(const Grid& g) {
  return 0.25 * (g.nodes() / std::sqrt(28.0)).cosh().pow(-2);
}

PhysicalField gaussian(const Grid& g) { return (-g.nodes().square()).exp(); }

}  // namespace

TEST_CASE("stabilizing factor is 1 at the exact fixed point and scales as 1/a") {
  Grid g(100.0, 1024);
  KernelSpec kernel = KernelSpec::exponential();
  PhysicalField phi = ibq_profile(g);

  CHECK(stabilizing_factor(phi, kernel, g, kIbqSpeed, 2) ==
        doctest::Approx(1.0).epsilon(1e-6));
  // for p=2 the numerator scales a^2 and the denominator a^3
  CHECK(stabilizing_factor(PhysicalField(2.0 * phi), kernel, g, kIbqSpeed, 2) ==
        doctest::Approx(0.5).epsilon(1e-9));
  CHECK(stabilizing_factor(PhysicalField(0.25 * phi), kernel, g, kIbqSpeed, 2) ==
        doctest::Approx(4.0).epsilon(1e-9));
}

TEST_CASE("stabilizing factor rejects the zero field") {
  Grid g(50.0, 128);
  CHECK_THROWS_AS(stabilizing_factor(PhysicalField::Zero(128),
                                     KernelSpec::exponential(), g, 1.2, 2),
                  ZeroDenominator);
}

TEST_CASE("residual of the analytic profile, zero field, and a non-solution") {
  Grid g(100.0, 1024);
  KernelSpec kernel = KernelSpec::exponential();
  CHECK(residual(ibq_profile(g), kernel, g, kIbqSpeed, 2) < 1e-8);
  CHECK(residual(PhysicalField::Zero(1024), kernel, g, kIbqSpeed, 2) == 0.0);
  CHECK(residual(gaussian(g), kernel, g, 1.08, 2) > 1e-2);
}

TEST_CASE("iterate_once maps the fixed point to itself") {
  Grid g(100.0, 1024);
  KernelSpec kernel = KernelSpec::exponential();
  SolitarySolveConfig cfg{kIbqSpeed, 2, 2.0, 1e-10, 500, gaussian(g)};
  PhysicalField phi = ibq_profile(g);
  SpectralField next = iterate_once(forward(g, phi), kernel, g, cfg);
  CHECK((inverse(g, next) - phi).abs().maxCoeff() < 1e-8);
}

TEST_CASE("iterate_once on the zero field reports the degenerate denominator") {
  Grid g(50.0, 128);
  SolitarySolveConfig cfg{1.2, 2, 2.0, 1e-10, 500, gaussian(g)};
  CHECK_THROWS_AS(
      iterate_once(SpectralField::Zero(128), KernelSpec::exponential(), g, cfg),
      ZeroDenominator);
}

TEST_CASE("solve_solitary recovers the closed-form IBq wave") {
  Grid g(100.0, 1024);
  SolitarySolveConfig cfg{kIbqSpeed, 2, 2.0, 1e-10, 500, gaussian(g)};
  auto [phi, report] = solve_solitary(KernelSpec::exponential(), g, cfg);
  REQUIRE(report.converged);
  CHECK(report.iterations_used < 100);
  CHECK(std::abs(phi.maxCoeff() - 0.25) < 1e-4);
  CHECK((phi - ibq_profile(g)).abs().maxCoeff() < 1e-6);
  CHECK_FALSE(report.boundary_warning);
  // the report carries a finite, nonnegative residual history
  for (const auto& rec : report.history) {
    CHECK(std::isfinite(rec.residual));
    CHECK(rec.residual >= 0.0);
    CHECK(std::isfinite(rec.m_factor));
    CHECK(std::isfinite(rec.amplitude));
  }
  CHECK(report.history.back().residual <= cfg.tol);
  // at convergence the stabilizing factor sits at 1 within 10*tol
  CHECK(std::abs(stabilizing_factor(phi, KernelSpec::exponential(), g,
                                    kIbqSpeed, 2) -
                 1.0) < 10.0 * cfg.tol);
}

TEST_CASE("solve_solitary on the sinusoidal kernel (paper configuration)") {
  Grid g(100.0, 1024);
  KernelSpec kernel = KernelSpec::sin_modulated(1.0);
  SolitarySolveConfig cfg{1.08, 2, 2.0, 1e-10, 500, gaussian(g)};
  auto [phi, report] = solve_solitary(kernel, g, cfg);
  REQUIRE(report.converged);
  CHECK(report.history.back().residual <= 1e-10);
  // after the initial transient the residual decreases monotonically
  for (std::size_t i = 5; i + 1 < report.history.size(); ++i) {
    CHECK(report.history[i + 1].residual < report.history[i].residual);
  }
  // an even guess yields an even profile
  const int n = g.n_points();
  Real asym = 0;
  for (int j = 1; j < n; ++j) {
    asym = std::max(asym, std::abs(phi[j] - phi[n - j]));
  }
  CHECK(asym < 1e-12);
}

TEST_CASE("solve_solitary rejects too-slow speeds") {
  Grid g(100.0, 256);
  SolitarySolveConfig cfg{0.9, 2, 2.0, 1e-10, 100, gaussian(g)};
  CHECK_THROWS_AS(solve_solitary(KernelSpec::exponential(), g, cfg), SpeedTooSlow);
  CHECK_THROWS_AS(solve_solitary(KernelSpec::sin_modulated(1.0), g, cfg),
                  SpeedTooSlow);
  // c^2 must also clear the rational-mix supremum 1 + mu
  SolitarySolveConfig cfg2{1.2, 2, 2.0, 1e-10, 100, gaussian(g)};
  CHECK_THROWS_AS(solve_solitary(KernelSpec::rational_mix(0.5), g, cfg2),
                  SpeedTooSlow);
}

TEST_CASE("solve_solitary input validation") {
  Grid g(50.0, 128);
  SolitarySolveConfig cfg{1.2, 2, 2.0, 1e-10, 100, PhysicalField::Zero(128)};
  CHECK_THROWS_AS(solve_solitary(KernelSpec::exponential(), g, cfg),
                  InvalidArgument);
  cfg.initial_guess = gaussian(g);
  cfg.gamma = 0.0;
  CHECK_THROWS_AS(solve_solitary(KernelSpec::exponential(), g, cfg),
                  InvalidArgument);
  cfg.gamma = 2.0;
  cfg.tol = -1.0;
  CHECK_THROWS_AS(solve_solitary(KernelSpec::exponential(), g, cfg),
                  InvalidArgument);
  cfg.tol = 1e-10;
  cfg.initial_guess = PhysicalField::Zero(64);
  CHECK_THROWS_AS(solve_solitary(KernelSpec::exponential(), g, cfg),
                  LengthMismatch);
}

TEST_CASE("gamma = 1 stalls: the stabilized map is scale-invariant") {
  // For gamma = 1, p = 2 every rescaling of a solution is a fixed point, so
  // the iteration parks at a wrongly-scaled profile with M = 1/a and the
  // residual never reaches tol.
  Grid g(100.0, 512);
  KernelSpec kernel = KernelSpec::sin_modulated(1.0);
  SolitarySolveConfig cfg{1.08, 2, 1.0, 1e-10, 120, gaussian(g)};
  auto [phi, report] = solve_solitary(kernel, g, cfg);
  CHECK_FALSE(report.converged);
  CHECK(report.iterations_used == 120);
  const Real m_last = report.history.back().m_factor;
  CHECK(std::abs(m_last * phi.maxCoeff() / 0.2443 - 1.0) < 0.05);
}
