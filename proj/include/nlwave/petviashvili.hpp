#pragma once

#include <utility>
#include <vector>

#include "nlwave/kernels.hpp"
#include "nlwave/transforms.hpp"

namespace nlwave {

/// Inputs for one solitary-wave construction at speed c. Requires
/// c^2 > sup over the grid of beta_hat (strictly), gamma > 0, tol > 0 and a
/// nonzero initial guess.
struct SolitarySolveConfig {
  Real c = 1.08;
  int p = 2;
  Real gamma = 2.0;
  Real tol = 1e-10;
  int max_iter = 500;
  PhysicalField initial_guess;
};

struct IterationRecord {
  Real residual;   // ||c^2 phi - H(phi + phi^p)||_inf after the update
  Real m_factor;   // stabilizing factor used in the update
  Real amplitude;  // max nodal value after the update
};

struct IterationReport {
  std::vector<IterationRecord> history;
  bool converged = false;
  int iterations_used = 0;
  /// |phi| at the periodic boundary of the converged profile; the domain is
  /// too small when this is not negligible.
  Real boundary_value = 0.0;
  bool boundary_warning = false;
};

/// Stabilizing factor
///   M = sum_k (c^2 - beta_hat) |phi_hat|^2
///       / sum_k beta_hat (phi^p)_hat conj(phi_hat),
/// formed as discrete sums over all modes; equals 1 at a solution.
Real stabilizing_factor(const PhysicalField& phi, const KernelSpec& kernel,
                        const Grid& grid, Real c, int p);

/// One update phi_hat <- M^gamma * beta_hat/(c^2 - beta_hat) * (phi^p)_hat.
SpectralField iterate_once(const SpectralField& phi_hat,
                           const KernelSpec& kernel, const Grid& grid,
                           const SolitarySolveConfig& cfg);

/// sup over nodes of |c^2 phi - H(phi + phi^p)|, computed spectrally.
Real residual(const PhysicalField& phi, const KernelSpec& kernel,
              const Grid& grid, Real c, int p);

/// Iterates until residual <= cfg.tol or cfg.max_iter. Non-convergence is a
/// status in the report, not an error.
std::pair<PhysicalField, IterationReport> solve_solitary(
    const KernelSpec& kernel, const Grid& grid,
    const SolitarySolveConfig& cfg);

}  // namespace nlwave
