#include "nlwave/sweeps.hpp"

#include <future>
#include <limits>
#include <sstream>

namespace nlwave {

namespace {

/// Runs f(0..n-1) across threads and gathers results in index order, so sweep
/// output is independent of scheduling. Exceptions rethrow in index order.
template <typename R, typename F>
std::vector<R> ordered_parallel_map(std::size_t n, F&& f) {
  std::vector<R> out;
  out.reserve(n);
  if (n <= 1) {
    for (std::size_t i = 0; i < n; ++i) out.push_back(f(i));
    return out;
  }
  std::vector<std::future<R>> futures;
  futures.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    futures.push_back(std::async(std::launch::async, f, i));
  }
  for (auto& fut : futures) out.push_back(fut.get());
  return out;
}

KernelSpec limit_kernel(LimitFamily family, Real param) {
  if (param == 0.0) {
    return family == LimitFamily::SinToIBq
               ? KernelSpec::exponential()
               : KernelSpec::double_exponential_symbol(1.0, 1.0);
  }
  return family == LimitFamily::SinToIBq ? KernelSpec::sin_modulated(param)
                                         : KernelSpec::rational_mix(param);
}

}  // namespace

std::vector<AmplitudeSpeedEntry> amplitude_speed(
    const KernelSpec& kernel, const Grid& grid, const std::vector<Real>& speeds,
    const SolitarySolveConfig& base) {
  if (speeds.empty()) throw InvalidArgument("speed list must be nonempty");
  const Real sup = sup_symbol(kernel, grid);
  for (Real c : speeds) {
    if (!(c * c > sup)) {
      std::ostringstream os;
      os << "speed c = " << c << " fails c^2 > sup beta_hat = " << sup;
      throw SpeedTooSlow(os.str());
    }
  }
  return ordered_parallel_map<AmplitudeSpeedEntry>(
      speeds.size(), [&](std::size_t i) {
        SolitarySolveConfig cfg = base;
        cfg.c = speeds[i];
        auto [phi, report] = solve_solitary(kernel, grid, cfg);
        return AmplitudeSpeedEntry{speeds[i], phi.maxCoeff(), report.converged,
                                   report.iterations_used};
      });
}

std::vector<KernelLimitEntry> kernel_limit_study(
    LimitFamily family, const std::vector<Real>& params,
    const ReferenceSolution& ref, const Grid& grid, Real dt, Real t_end,
    int p) {
  if (params.empty()) throw InvalidArgument("parameter list must be nonempty");
  const bool family_matches =
      (family == LimitFamily::SinToIBq &&
       ref.family() == ReferenceFamily::IBqSech2) ||
      (family == LimitFamily::MixToHBq &&
       ref.family() == ReferenceFamily::HBqSech4);
  if (!family_matches) {
    throw InvalidArgument("limit family does not match the reference solution");
  }
  for (Real v : params) {
    if (v < 0) throw InvalidArgument("kernel limit parameters must be >= 0");
  }

  const auto [u0, v0] = reference_eval(ref, grid, 0.0);
  const auto [u_ref_T, v_ref_T] = reference_eval(ref, grid, t_end);
  // The scan must reject inadmissible kernels before any entry starts.
  for (Real v : params) ensure_positive_on_grid(limit_kernel(family, v), grid);

  return ordered_parallel_map<KernelLimitEntry>(
      params.size(), [&, u0 = u0, v0 = v0, u_ref_T = u_ref_T](std::size_t i) {
        SimConfig cfg(grid, limit_kernel(family, params[i]), p, dt, t_end,
                      std::numeric_limits<int>::max());
        Trajectory traj = evolve(u0, v0, cfg);
        if (traj.terminated_early) {
          std::ostringstream os;
          os << "kernel limit run at parameter " << params[i]
             << " crossed the blow-up threshold at t = "
             << traj.terminated_early->crossing_time;
          throw DivergenceDetected(os.str());
        }
        return KernelLimitEntry{
            params[i], linf_distance(traj.samples.back().u, u_ref_T)};
      });
}

std::vector<GammaStudyEntry> gamma_study(const KernelSpec& kernel,
                                         const Grid& grid,
                                         const std::vector<Real>& gammas,
                                         const SolitarySolveConfig& base) {
  if (gammas.empty()) throw InvalidArgument("gamma list must be nonempty");
  for (Real g : gammas) {
    if (!(g > 0)) throw InvalidArgument("gamma values must be positive");
  }
  return ordered_parallel_map<GammaStudyEntry>(
      gammas.size(), [&](std::size_t i) {
        SolitarySolveConfig cfg = base;
        cfg.gamma = gammas[i];
        auto [phi, report] = solve_solitary(kernel, grid, cfg);
        return GammaStudyEntry{gammas[i], report.iterations_used,
                               report.converged, std::move(report.history)};
      });
}

ConvergenceReport convergence_order(const std::vector<int>& n_values,
                                    const KernelSpec& kernel,
                                    const ReferenceEval& eval, Real half_length,
                                    Real dt, Real t_end, int p) {
  if (n_values.empty()) throw InvalidArgument("N list must be nonempty");
  for (std::size_t i = 0; i < n_values.size(); ++i) {
    if (n_values[i] < 4 || n_values[i] % 2 != 0) {
      throw InvalidArgument("N values must be even and >= 4");
    }
    if (i > 0 && n_values[i] <= n_values[i - 1]) {
      throw InvalidArgument("N values must be increasing");
    }
  }

  auto errors = ordered_parallel_map<Real>(n_values.size(), [&](std::size_t i) {
    const Grid grid(half_length, n_values[i]);
    const auto [u0, v0] = eval(grid, 0.0);
    SimConfig cfg(grid, kernel, p, dt, t_end,
                  std::numeric_limits<int>::max());
    Trajectory traj = evolve(u0, v0, cfg);
    if (traj.terminated_early) {
      throw DivergenceDetected("convergence run crossed the blow-up threshold");
    }
    const auto [u_ref, v_ref] = eval(grid, t_end);
    return linf_distance(traj.samples.back().u, u_ref);
  });

  ConvergenceReport report;
  for (std::size_t i = 0; i < n_values.size(); ++i) {
    bool at_floor = false;
    if (i > 0 && !report.floor_index) {
      // The floor starts where a doubling stops paying at least 10x.
      at_floor = !(errors[i] < errors[i - 1] / 10.0);
      if (at_floor) report.floor_index = static_cast<int>(i);
    } else if (report.floor_index) {
      at_floor = true;
    }
    report.entries.push_back({n_values[i], errors[i], at_floor});
  }
  return report;
}

ConvergenceReport convergence_order(const std::vector<int>& n_values,
                                    const ReferenceSolution& ref,
                                    Real half_length, Real dt, Real t_end,
                                    int p) {
  return convergence_order(
      n_values, ref.kernel(),
      [&ref](const Grid& grid, Real t) { return reference_eval(ref, grid, t); },
      half_length, dt, t_end, p);
}

}  // namespace nlwave
