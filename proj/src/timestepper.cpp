#include "nlwave/timestepper.hpp"

#include <cmath>

namespace nlwave {

namespace {

/// rhs with the grid-sampled multiplier -kappa^2 beta_hat(kappa) cached.
struct SemiDiscreteSystem {
  const Grid& grid;
  PhysicalField neg_k2_beta;  // -kappa^2 * beta_hat(kappa)
  int p;

  SemiDiscreteSystem(const Grid& g, const KernelSpec& kernel, int p_)
      : grid(g),
        neg_k2_beta(-g.phys_wavenumbers().square() *
                    kernel.beta_hat(g.phys_wavenumbers())),
        p(p_) {}

  void operator()(const SpectralField& u_hat, const SpectralField& v_hat,
                  SpectralField& du, SpectralField& dv) const {
    du = v_hat;
    const PhysicalField u = inverse(grid, u_hat);
    const SpectralField nl = forward(grid, int_power(u, p));
    dv = (u_hat + nl) * neg_k2_beta.cast<Complex>();
  }
};

void check_finite(const EvolutionState& state) {
  if (!state.u_hat.allFinite() || !state.v_hat.allFinite()) {
    throw NonFiniteState("evolution state contains NaN or Inf coefficients");
  }
}

EvolutionState step_with(const SemiDiscreteSystem& sys,
                         const EvolutionState& state, Real dt) {
  SpectralField k1u, k1v, k2u, k2v, k3u, k3v, k4u, k4v;
  sys(state.u_hat, state.v_hat, k1u, k1v);
  sys(state.u_hat + 0.5 * dt * k1u, state.v_hat + 0.5 * dt * k1v, k2u, k2v);
  sys(state.u_hat + 0.5 * dt * k2u, state.v_hat + 0.5 * dt * k2v, k3u, k3v);
  sys(state.u_hat + dt * k3u, state.v_hat + dt * k3v, k4u, k4v);
  EvolutionState next;
  next.u_hat = state.u_hat + (dt / 6.0) * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
  next.v_hat = state.v_hat + (dt / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
  next.time = state.time + dt;
  return next;
}

}  // namespace

SimConfig::SimConfig(Grid grid, KernelSpec kernel, int p, Real dt, Real t_end,
                     int sample_every, Real blowup_threshold)
    : grid_(std::move(grid)),
      kernel_(std::move(kernel)),
      p_(p),
      t_end_(t_end),
      sample_every_(sample_every),
      blowup_threshold_(blowup_threshold) {
  if (p_ < 2) throw InvalidArgument("nonlinearity power p must be >= 2");
  if (!(dt > 0) || !(t_end > 0)) {
    throw InvalidArgument("dt and t_end must be positive");
  }
  if (sample_every_ < 1) throw InvalidArgument("sample_every must be >= 1");
  if (!(blowup_threshold_ > 0)) {
    throw InvalidArgument("blowup threshold must be positive");
  }
  // dt is rounded so that steps * dt == t_end exactly.
  steps_ = std::max<int>(1, static_cast<int>(std::llround(t_end_ / dt)));
  dt_ = t_end_ / steps_;
}

std::pair<SpectralField, SpectralField> rhs(const EvolutionState& state,
                                            const SimConfig& cfg) {
  check_finite(state);
  SemiDiscreteSystem sys(cfg.grid(), cfg.kernel(), cfg.p());
  SpectralField du, dv;
  sys(state.u_hat, state.v_hat, du, dv);
  return {std::move(du), std::move(dv)};
}

EvolutionState rk4_step(const EvolutionState& state, const SimConfig& cfg) {
  check_finite(state);
  SemiDiscreteSystem sys(cfg.grid(), cfg.kernel(), cfg.p());
  return step_with(sys, state, cfg.dt());
}

Trajectory evolve(const PhysicalField& u0, const PhysicalField& v0,
                  const SimConfig& cfg, const std::vector<Observer>& observers) {
  const Grid& grid = cfg.grid();
  ensure_positive_on_grid(cfg.kernel(), grid);
  SemiDiscreteSystem sys(grid, cfg.kernel(), cfg.p());

  EvolutionState state{forward(grid, u0), forward(grid, v0), 0.0};
  check_finite(state);

  Trajectory traj;
  auto record = [&](const PhysicalField& u, const PhysicalField& v, Real t,
                    Real sup) {
    TrajectorySample sample{t, u, v};
    for (const auto& obs : observers) obs(sample);
    traj.sup_norms.emplace_back(t, sup);
    traj.samples.push_back(std::move(sample));
  };

  Real sup_prev = u0.abs().maxCoeff();
  record(u0, v0, 0.0, sup_prev);
  if (sup_prev > cfg.blowup_threshold()) {
    traj.terminated_early = EarlyTermination{StopReason::Blowup, 0.0};
    return traj;
  }

  for (int m = 1; m <= cfg.steps(); ++m) {
    state = step_with(sys, state, cfg.dt());
    check_finite(state);
    const PhysicalField u = inverse(grid, state.u_hat);
    const Real sup = u.abs().maxCoeff();
    if (sup > cfg.blowup_threshold()) {
      const Real frac =
          (cfg.blowup_threshold() - sup_prev) / (sup - sup_prev);
      const Real crossing = (m - 1) * cfg.dt() + frac * cfg.dt();
      record(u, inverse(grid, state.v_hat), state.time, sup);
      traj.terminated_early = EarlyTermination{StopReason::Blowup, crossing};
      return traj;
    }
    if (m % cfg.sample_every() == 0 || m == cfg.steps()) {
      record(u, inverse(grid, state.v_hat), state.time, sup);
    }
    sup_prev = sup;
  }
  return traj;
}

}  // namespace nlwave
