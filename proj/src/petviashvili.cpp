#include "nlwave/petviashvili.hpp"

#include <cmath>
#include <sstream>

namespace nlwave {

namespace {

constexpr Real kDivergenceCap = 1e6;

struct StabilizingParts {
  Real numerator;
  Real denominator;
  Real scale;  // positive quadratic scale shared by both sums
};

StabilizingParts stabilizing_parts(const SpectralField& phi_hat,
                                   const SpectralField& nl_hat,
                                   const PhysicalField& beta, Real c) {
  const Real c2 = c * c;
  Real num = 0, scale = 0;
  Complex den(0, 0);
  for (Eigen::Index i = 0; i < phi_hat.size(); ++i) {
    const Real mag2 = std::norm(phi_hat[i]);
    num += (c2 - beta[i]) * mag2;
    scale += (c2 + std::abs(beta[i])) * mag2;
    den += beta[i] * nl_hat[i] * std::conj(phi_hat[i]);
  }
  if (std::abs(den) <= 1e-14 * scale) {
    std::ostringstream os;
    os << "stabilizing factor denominator " << std::abs(den)
       << " is negligible against scale " << scale;
    throw ZeroDenominator(os.str());
  }
  if (std::abs(den.imag()) > 1e-10 * std::abs(den)) {
    std::ostringstream os;
    os << "stabilizing factor denominator has imaginary part " << den.imag()
       << " against magnitude " << std::abs(den);
    throw NonRealResult(os.str());
  }
  return {num, den.real(), scale};
}

Real pow_gamma(Real m, Real gamma) {
  if (m <= 0) {
    std::ostringstream os;
    os << "stabilizing factor " << m << " is not positive";
    throw DivergenceDetected(os.str());
  }
  return std::pow(m, gamma);
}

void validate(const SolitarySolveConfig& cfg) {
  if (cfg.p < 2) throw InvalidArgument("nonlinearity power p must be >= 2");
  if (!(cfg.gamma > 0)) throw InvalidArgument("gamma must be positive");
  if (!(cfg.tol > 0)) throw InvalidArgument("tol must be positive");
  if (cfg.max_iter < 1) throw InvalidArgument("max_iter must be >= 1");
}

void check_speed(const KernelSpec& kernel, const Grid& grid, Real c) {
  const Real sup = sup_symbol(kernel, grid);
  if (!(c * c > sup)) {
    std::ostringstream os;
    os << "c^2 = " << c * c << " must strictly exceed the grid supremum of "
       << "beta_hat = " << sup;
    throw SpeedTooSlow(os.str());
  }
}

}  // namespace

Real stabilizing_factor(const PhysicalField& phi, const KernelSpec& kernel,
                        const Grid& grid, Real c, int p) {
  const SpectralField phi_hat = forward(grid, phi);
  const SpectralField nl_hat = forward(grid, int_power(phi, p));
  const PhysicalField beta = kernel.beta_hat(grid.phys_wavenumbers());
  const auto parts = stabilizing_parts(phi_hat, nl_hat, beta, c);
  return parts.numerator / parts.denominator;
}

SpectralField iterate_once(const SpectralField& phi_hat,
                           const KernelSpec& kernel, const Grid& grid,
                           const SolitarySolveConfig& cfg) {
  validate(cfg);
  check_speed(kernel, grid, cfg.c);
  const PhysicalField beta = kernel.beta_hat(grid.phys_wavenumbers());
  const PhysicalField phi = inverse(grid, phi_hat);
  const SpectralField nl_hat = forward(grid, int_power(phi, cfg.p));
  const auto parts = stabilizing_parts(phi_hat, nl_hat, beta, cfg.c);
  const Real m_gamma =
      pow_gamma(parts.numerator / parts.denominator, cfg.gamma);

  const Real c2 = cfg.c * cfg.c;
  SpectralField next(phi_hat.size());
  for (Eigen::Index i = 0; i < phi_hat.size(); ++i) {
    next[i] = m_gamma * beta[i] / (c2 - beta[i]) * nl_hat[i];
  }
  const Real sup = inverse(grid, next).abs().maxCoeff();
  if (!(sup <= kDivergenceCap)) {
    std::ostringstream os;
    os << "iterate grew to sup " << sup << ", past the divergence cap "
       << kDivergenceCap;
    throw DivergenceDetected(os.str());
  }
  return next;
}

Real residual(const PhysicalField& phi, const KernelSpec& kernel,
              const Grid& grid, Real c, int p) {
  const SpectralField phi_hat = forward(grid, phi);
  const SpectralField nl_hat = forward(grid, int_power(phi, p));
  const SpectralField r_hat =
      c * c * phi_hat -
      convolve(kernel, grid, SpectralField(phi_hat + nl_hat));
  return inverse_complex(grid, r_hat).real().abs().maxCoeff();
}

std::pair<PhysicalField, IterationReport> solve_solitary(
    const KernelSpec& kernel, const Grid& grid,
    const SolitarySolveConfig& cfg) {
  validate(cfg);
  if (cfg.initial_guess.size() != grid.n_points()) {
    throw LengthMismatch("initial guess does not match the grid");
  }
  if (!(cfg.initial_guess.abs().maxCoeff() > 0)) {
    throw InvalidArgument("initial guess must be nonzero");
  }
  ensure_positive_on_grid(kernel, grid);
  check_speed(kernel, grid, cfg.c);

  const PhysicalField beta = kernel.beta_hat(grid.phys_wavenumbers());
  const Real c2 = cfg.c * cfg.c;
  PhysicalField multiplier = beta / (c2 - beta);

  IterationReport report;
  report.history.reserve(static_cast<std::size_t>(cfg.max_iter));

  SpectralField phi_hat = forward(grid, cfg.initial_guess);
  PhysicalField phi = cfg.initial_guess;
  for (int n = 0; n < cfg.max_iter; ++n) {
    const SpectralField nl_hat = forward(grid, int_power(phi, cfg.p));
    const auto parts = stabilizing_parts(phi_hat, nl_hat, beta, cfg.c);
    const Real m = parts.numerator / parts.denominator;
    const Real m_gamma = pow_gamma(m, cfg.gamma);
    phi_hat = m_gamma * multiplier.cast<Complex>() * nl_hat;
    phi = inverse(grid, phi_hat);

    const Real sup = phi.abs().maxCoeff();
    if (!(sup <= kDivergenceCap)) {
      std::ostringstream os;
      os << "iterate grew to sup " << sup << " at iteration " << n + 1;
      throw DivergenceDetected(os.str());
    }
    const Real res = residual(phi, kernel, grid, cfg.c, cfg.p);
    if (!std::isfinite(res)) {
      throw NonFiniteState("residual became non-finite during iteration");
    }
    report.history.push_back({res, m, phi.maxCoeff()});
    if (res <= cfg.tol) {
      report.converged = true;
      break;
    }
  }
  report.iterations_used = static_cast<int>(report.history.size());
  // Periodization check: the profile should have decayed at the boundary.
  report.boundary_value = std::abs(phi[0]);
  report.boundary_warning = report.converged && report.boundary_value > 1e-8;
  return {std::move(phi), std::move(report)};
}

}  // namespace nlwave
