#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "nlwave/kernels.hpp"
#include "nlwave/transforms.hpp"

namespace nlwave {

/// Spectral state of (u, v = u_t) at a point in time.
struct EvolutionState {
  SpectralField u_hat;
  SpectralField v_hat;
  Real time = 0.0;
};

/// Fixed-step simulation setup. dt is rounded so that an integer number of
/// steps lands exactly on t_end.
class SimConfig {
 public:
  SimConfig(Grid grid, KernelSpec kernel, int p, Real dt, Real t_end,
            int sample_every = 10, Real blowup_threshold = 1e3);

  const Grid& grid() const { return grid_; }
  const KernelSpec& kernel() const { return kernel_; }
  int p() const { return p_; }
  Real dt() const { return dt_; }
  Real t_end() const { return t_end_; }
  int steps() const { return steps_; }
  int sample_every() const { return sample_every_; }
  Real blowup_threshold() const { return blowup_threshold_; }

 private:
  Grid grid_;
  KernelSpec kernel_;
  int p_;
  Real dt_;
  Real t_end_;
  int steps_;
  int sample_every_;
  Real blowup_threshold_;
};

/// Semi-discrete right-hand side:
///   du_hat = v_hat
///   dv_hat(k) = -kappa^2 beta_hat(kappa) [u_hat(k) + (u^p)_hat(k)]
/// with the nonlinear term formed pseudo-spectrally.
std::pair<SpectralField, SpectralField> rhs(const EvolutionState& state,
                                            const SimConfig& cfg);

/// One classical RK4 step of size cfg.dt().
EvolutionState rk4_step(const EvolutionState& state, const SimConfig& cfg);

struct TrajectorySample {
  Real time;
  PhysicalField u;
  PhysicalField v;
};

enum class StopReason { Blowup };

struct EarlyTermination {
  StopReason reason;
  /// sup|u| threshold crossing, linearly interpolated between steps.
  Real crossing_time;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  /// (t, sup|u|) at every recorded sample.
  std::vector<std::pair<Real, Real>> sup_norms;
  std::optional<EarlyTermination> terminated_early;
};

using Observer = std::function<void(const TrajectorySample&)>;

/// Runs cfg.steps() RK4 steps from (u0, v0), sampling every
/// cfg.sample_every() steps (plus the initial and final states). Terminates
/// early once sup|u| exceeds cfg.blowup_threshold(), recording the first
/// crossing. The sup norm is checked every step regardless of sample cadence.
Trajectory evolve(const PhysicalField& u0, const PhysicalField& v0,
                  const SimConfig& cfg,
                  const std::vector<Observer>& observers = {});

}  // namespace nlwave
