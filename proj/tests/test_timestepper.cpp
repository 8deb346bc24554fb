#include <doctest.h>

#include <cmath>
#include <random>

#include "nlwave/diagnostics.hpp"
#include "nlwave/timestepper.hpp"

using namespace nlwave;

namespace {

PhysicalField smooth_random(const Grid& g, unsigned seed) {
  // a few random low harmonics: smooth, well-resolved data
  std::mt19937 rng(seed);
  std::uniform_real_distribution<Real> amp(-0.5, 0.5);
  PhysicalField f = PhysicalField::Zero(g.n_points());
  for (int m = 0; m <= 4; ++m) {
    f += amp(rng) * (m * M_PI * g.nodes() / g.half_length()).cos() +
         amp(rng) * (m * M_PI * g.nodes() / g.half_length()).sin();
  }
  return f;
}

}  // namespace

TEST_CASE("SimConfig rounds dt to divide t_end exactly") {
  Grid g(10.0, 16);
  SimConfig cfg(g, KernelSpec::dirac(), 2, 0.03, 1.0);
  CHECK(cfg.steps() == 33);
  CHECK(cfg.steps() * cfg.dt() == doctest::Approx(1.0).epsilon(1e-15));

  CHECK_THROWS_AS(SimConfig(g, KernelSpec::dirac(), 1, 0.01, 1.0), InvalidArgument);
  CHECK_THROWS_AS(SimConfig(g, KernelSpec::dirac(), 2, -0.01, 1.0), InvalidArgument);
  CHECK_THROWS_AS(SimConfig(g, KernelSpec::dirac(), 2, 0.01, 1.0, 0), InvalidArgument);
  CHECK_THROWS_AS(SimConfig(g, KernelSpec::dirac(), 2, 0.01, 1.0, 1, -1.0),
                  InvalidArgument);
}

TEST_CASE("rhs at the rest state is zero") {
  Grid g(10.0, 32);
  SimConfig cfg(g, KernelSpec::exponential(), 2, 0.01, 1.0);
  EvolutionState state{SpectralField::Zero(32), SpectralField::Zero(32), 0.0};
  auto [du, dv] = rhs(state, cfg);
  CHECK(du.abs().maxCoeff() == 0.0);
  CHECK(dv.abs().maxCoeff() == 0.0);
}

TEST_CASE("rhs on a single +-1 mode pair with the Dirac kernel") {
  // L = pi puts kappa = 1 on mode 1; the quadratic term feeds modes 0 and +-2
  // only, so dv_hat(1) = -kappa^2 beta_hat (u_hat(1)) = -eps exactly.
  Grid g(M_PI, 32);
  SimConfig cfg(g, KernelSpec::dirac(), 2, 0.01, 1.0);
  const Real eps = 1e-3;
  SpectralField u = SpectralField::Zero(32), v = SpectralField::Zero(32);
  u[g.index_of(1)] = u[g.index_of(-1)] = eps;
  auto [du, dv] = rhs({u, v, 0.0}, cfg);
  CHECK(std::abs(dv[g.index_of(1)] - Complex(-eps, 0.0)) < 1e-17);
  CHECK(du.isApprox(v.matrix().array(), 0.0));
}

TEST_CASE("rhs quadratic coupling puts -kappa_2^2 beta a^2/4 on mode 2") {
  // u = a cos(pi x/L): u^2 = a^2/2 + (a^2/2) cos(2 pi x/L), whose mode-2
  // coefficient is a^2/4. Verified against a brute-force nodal square.
  Grid g(100.0, 128);
  SimConfig cfg(g, KernelSpec::exponential(), 2, 0.01, 1.0);
  const Real a = 0.7;
  PhysicalField u_phys = a * (M_PI * g.nodes() / g.half_length()).cos();
  auto [du, dv] = rhs({forward(g, u_phys), SpectralField::Zero(128), 0.0}, cfg);

  const Real kappa2 = 2.0 * M_PI / g.half_length();
  const Real beta2 = 1.0 / (1.0 + kappa2 * kappa2);
  const Complex expected(-kappa2 * kappa2 * beta2 * a * a / 4.0, 0.0);
  CHECK(std::abs(dv[g.index_of(2)] - expected) < 1e-15);

  // brute-force oracle for the same coefficient
  SpectralField sq = forward(g, PhysicalField(u_phys.square()));
  CHECK(std::abs(sq[g.index_of(2)] - Complex(a * a / 4.0, 0.0)) < 1e-15);
}

TEST_CASE("rhs rejects non-finite state") {
  Grid g(10.0, 16);
  SimConfig cfg(g, KernelSpec::dirac(), 2, 0.01, 1.0);
  SpectralField u = SpectralField::Zero(16);
  u[3] = Complex(std::numeric_limits<Real>::quiet_NaN(), 0.0);
  CHECK_THROWS_AS(rhs({u, SpectralField::Zero(16), 0.0}, cfg), NonFiniteState);
}

TEST_CASE("rk4 on the zero state only advances time") {
  Grid g(10.0, 16);
  SimConfig cfg(g, KernelSpec::exponential(), 2, 0.25, 1.0);
  EvolutionState s{SpectralField::Zero(16), SpectralField::Zero(16), 0.0};
  EvolutionState next = rk4_step(s, cfg);
  CHECK(next.u_hat.abs().maxCoeff() == 0.0);
  CHECK(next.v_hat.abs().maxCoeff() == 0.0);
  CHECK(next.time == doctest::Approx(0.25));
}

TEST_CASE("rk4 one-step error on the linear oscillator scales as dt^5") {
  // Single +-1 mode pair, Dirac kernel, L = pi: the mode obeys
  // u'' = -u (the quadratic term misses mode 1 at this amplitude).
  Grid g(M_PI, 32);
  const Real eps = 1e-5;

  // The leading dt^5 one-step error of RK4 on u'' = -u lands in the
  // v-component (the u-component error is even, O(dt^6)).
  auto one_step_error = [&](Real dt) {
    SimConfig cfg(g, KernelSpec::dirac(), 2, dt, dt);
    SpectralField u = SpectralField::Zero(32), v = SpectralField::Zero(32);
    u[g.index_of(1)] = u[g.index_of(-1)] = eps;
    EvolutionState next = rk4_step({u, v, 0.0}, cfg);
    const Complex exact_v = -eps * std::sin(dt);  // v(t) = -eps sin(t)
    return std::abs(next.v_hat[g.index_of(1)] - exact_v);
  };

  const Real e1 = one_step_error(0.1);
  const Real e2 = one_step_error(0.05);
  const Real ratio = e1 / e2;
  CHECK(ratio > 24.0);  // dt^5 halving gives 32x
  CHECK(ratio < 40.0);
}

TEST_CASE("rk4 preserves conjugate symmetry through the full nonlinearity") {
  Grid g(20.0, 64);
  SimConfig cfg(g, KernelSpec::sin_modulated(0.7), 2, 0.05, 1.0);
  EvolutionState s{forward(g, smooth_random(g, 3)), forward(g, smooth_random(g, 4)),
                   0.0};
  for (int i = 0; i < 5; ++i) s = rk4_step(s, cfg);
  CHECK(max_conjugate_asymmetry(g, s.u_hat) < 1e-14);
  CHECK(max_conjugate_asymmetry(g, s.v_hat) < 1e-14);
}

TEST_CASE("evolve: zero data stays zero, samples line up") {
  Grid g(10.0, 32);
  SimConfig cfg(g, KernelSpec::exponential(), 2, 0.1, 1.0, 5);
  int observer_calls = 0;
  Trajectory traj = evolve(PhysicalField::Zero(32), PhysicalField::Zero(32), cfg,
                           {[&](const TrajectorySample&) { ++observer_calls; }});
  CHECK_FALSE(traj.terminated_early.has_value());
  CHECK(traj.samples.size() == 3);  // t = 0, 0.5, 1.0
  CHECK(observer_calls == 3);
  CHECK(traj.samples.back().time == doctest::Approx(1.0));
  for (const auto& s : traj.samples) {
    CHECK(s.u.abs().maxCoeff() == 0.0);
    CHECK(s.v.abs().maxCoeff() == 0.0);
  }
}

TEST_CASE("evolve: DC mode of v is constant, DC mode of u grows linearly") {
  Grid g(15.0, 64);
  SimConfig cfg(g, KernelSpec::sin_modulated(0.4), 2, 0.02, 1.0, 10);
  PhysicalField u0 = smooth_random(g, 7), v0 = smooth_random(g, 8);
  const Real u_dc0 = forward(g, u0)[0].real();
  const Real v_dc0 = forward(g, v0)[0].real();
  // v gains nonzero mean through g(u) = u^2? No: the kappa=0 multiplier is 0,
  // so v_hat(0) stays put and u_hat(0) integrates it exactly linearly.
  Trajectory traj = evolve(u0, v0, cfg);
  for (const auto& s : traj.samples) {
    const Complex v_dc = forward(g, s.v)[0];
    const Complex u_dc = forward(g, s.u)[0];
    CHECK(std::abs(v_dc - Complex(v_dc0, 0.0)) < 1e-13);
    CHECK(std::abs(u_dc - Complex(u_dc0 + v_dc0 * s.time, 0.0)) < 1e-12);
  }
}

TEST_CASE("evolve terminates immediately when the threshold is below sup|u0|") {
  Grid g(10.0, 32);
  SimConfig cfg(g, KernelSpec::exponential(), 2, 0.01, 1.0, 1, 0.5);
  PhysicalField u0 = PhysicalField::Constant(32, 0.9);
  Trajectory traj = evolve(u0, PhysicalField::Zero(32), cfg);
  REQUIRE(traj.terminated_early.has_value());
  CHECK(traj.terminated_early->reason == StopReason::Blowup);
  CHECK(traj.terminated_early->crossing_time == 0.0);
  CHECK(traj.samples.size() == 1);
}

TEST_CASE("evolve propagates the IBq solitary wave") {
  // Closed-form initial data on a fully resolving grid; one time unit.
  Grid g(100.0, 512);
  ReferenceSolution ref = ReferenceSolution::ibq();
  auto [u0, v0] = reference_eval(ref, g, 0.0);
  SimConfig cfg(g, KernelSpec::exponential(), 2, 0.01, 1.0, 100);
  Trajectory traj = evolve(u0, v0, cfg);
  REQUIRE_FALSE(traj.terminated_early.has_value());
  auto [uT, vT] = reference_eval(ref, g, 1.0);
  CHECK(linf_distance(traj.samples.back().u, uT) < 1e-9);
  CHECK(linf_distance(traj.samples.back().v, vT) < 1e-9);
}

TEST_CASE("evolve enforces the positivity scan for eta >= 1 kernels") {
  Grid g(100.0, 1024);
  SimConfig cfg(g, KernelSpec::sin_modulated(5.0), 2, 0.01, 1.0);
  PhysicalField u0 = (-g.nodes().square()).exp();
  CHECK_THROWS_AS(evolve(u0, PhysicalField::Zero(1024), cfg), NonPositiveSymbol);
}
