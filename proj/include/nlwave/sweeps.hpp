#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "nlwave/diagnostics.hpp"
#include "nlwave/petviashvili.hpp"
#include "nlwave/timestepper.hpp"

namespace nlwave {

/// Parameter sweeps over the solver modules. Entries are independent and run
/// in parallel; emitted order always follows input order.

struct AmplitudeSpeedEntry {
  Real c;
  Real amplitude;  // max nodal value of the converged profile
  bool converged;
  int iterations;
};

/// One solve_solitary per speed. Speeds must all satisfy
/// c^2 > sup_symbol(kernel, grid); non-converged entries are recorded, never
/// dropped.
std::vector<AmplitudeSpeedEntry> amplitude_speed(
    const KernelSpec& kernel, const Grid& grid, const std::vector<Real>& speeds,
    const SolitarySolveConfig& base);

enum class LimitFamily { SinToIBq, MixToHBq };

struct KernelLimitEntry {
  Real param;      // eta or mu; 0 selects the exact reference kernel
  Real linf_at_T;  // distance to the closed-form reference at t_end
};

/// Evolves the reference initial data under the parameterized kernel for each
/// value and measures the L_inf distance to the reference solution at t_end.
std::vector<KernelLimitEntry> kernel_limit_study(
    LimitFamily family, const std::vector<Real>& params,
    const ReferenceSolution& ref, const Grid& grid, Real dt, Real t_end,
    int p);

struct GammaStudyEntry {
  Real gamma;
  int iterations;
  bool converged;
  std::vector<IterationRecord> history;
};

/// solve_solitary per gamma, identical otherwise.
std::vector<GammaStudyEntry> gamma_study(const KernelSpec& kernel,
                                         const Grid& grid,
                                         const std::vector<Real>& gammas,
                                         const SolitarySolveConfig& base);

struct ConvergenceEntry {
  int n_points;
  Real linf_error;
  bool at_floor;  // improvement over the previous N fell short of 10x
};

struct ConvergenceReport {
  std::vector<ConvergenceEntry> entries;
  std::optional<int> floor_index;
};

/// Evolves the reference data at each resolution and measures the L_inf error
/// against the closed form at t_end. dt must be small enough that spatial
/// error dominates at the smallest N; entries past the accuracy floor are
/// flagged.
ConvergenceReport convergence_order(const std::vector<int>& n_values,
                                    const ReferenceSolution& ref,
                                    Real half_length, Real dt, Real t_end,
                                    int p);

/// Generic-reference variant: `eval(grid, t)` supplies the exact (u, v).
using ReferenceEval =
    std::function<std::pair<PhysicalField, PhysicalField>(const Grid&, Real)>;
ConvergenceReport convergence_order(const std::vector<int>& n_values,
                                    const KernelSpec& kernel,
                                    const ReferenceEval& eval, Real half_length,
                                    Real dt, Real t_end, int p);

}  // namespace nlwave
