#include "nlwave/diagnostics.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace nlwave {

namespace {

Real sech(Real x) { return 1.0 / std::cosh(x); }

constexpr Real kIbqAmplitude = 0.25;           // 1.5*(c^2-1) at c^2 = 7/6
constexpr Real kHbqAmplitude = 105.0 / 266.0;  // (105/338)*c^2 at c^2 = 169/133

}  // namespace

EnergyBreakdown energy(const PhysicalField& u, const PhysicalField& v,
                       const KernelSpec& kernel, const Grid& grid, int p) {
  if (u.size() != grid.n_points() || v.size() != grid.n_points()) {
    throw LengthMismatch("fields do not match the grid");
  }
  if (p < 2) throw InvalidArgument("nonlinearity power p must be >= 2");

  const PhysicalField beta = kernel.beta_hat(grid.phys_wavenumbers());
  const auto& kappa = grid.phys_wavenumbers();
  for (Eigen::Index i = 1; i < beta.size(); ++i) {
    if (!(beta[i] > 0) || !std::isfinite(beta[i])) {
      std::ostringstream os;
      os << "operator P needs beta_hat > 0 at every nonzero mode; got "
         << beta[i] << " at kappa = " << kappa[i];
      throw SingularSymbol(os.str());
    }
  }

  const SpectralField v_hat = forward(grid, v);
  EnergyBreakdown e;
  // ||P u_t||^2 = 2L sum_{k != 0} |v_hat|^2 / (kappa^2 beta_hat)
  Real p_sum = 0;
  for (Eigen::Index i = 1; i < v_hat.size(); ++i) {
    p_sum += std::norm(v_hat[i]) / (kappa[i] * kappa[i] * beta[i]);
  }
  e.p_term = 2.0 * grid.half_length() * p_sum;
  e.l2_term = grid.dx() * u.square().sum();
  e.potential_term = 2.0 * grid.dx() * int_power(u, p + 1).sum() / (p + 1);
  e.total = e.p_term + e.l2_term + e.potential_term;
  e.dc_velocity_mass = v_hat[0].real();
  return e;
}

std::vector<std::pair<Real, Real>> energy_drift(const Trajectory& trajectory,
                                                const KernelSpec& kernel,
                                                const Grid& grid, int p) {
  std::vector<std::pair<Real, Real>> out;
  out.reserve(trajectory.samples.size());
  Real e0 = 0;
  for (std::size_t i = 0; i < trajectory.samples.size(); ++i) {
    const auto& s = trajectory.samples[i];
    const Real e = energy(s.u, s.v, kernel, grid, p).total;
    if (i == 0) e0 = e;
    out.emplace_back(s.time, std::abs(e - e0) / std::max(std::abs(e0), 1e-14));
  }
  return out;
}

ReferenceSolution::ReferenceSolution(ReferenceFamily family, Real speed)
    : family_(family), speed_(speed) {
  if (family_ == ReferenceFamily::IBqSech2) {
    amplitude_ = kIbqAmplitude;
    inverse_width_ = 1.0 / std::sqrt(28.0);
  } else {
    amplitude_ = kHbqAmplitude;
    inverse_width_ = 1.0 / (2.0 * std::sqrt(13.0));
  }
}

ReferenceSolution ReferenceSolution::ibq() {
  return ReferenceSolution(ReferenceFamily::IBqSech2, std::sqrt(7.0 / 6.0));
}

ReferenceSolution ReferenceSolution::hbq(Real speed) {
  if (!(speed > 0)) throw InvalidArgument("reference speed must be positive");
  return ReferenceSolution(ReferenceFamily::HBqSech4, speed);
}

KernelSpec ReferenceSolution::kernel() const {
  return family_ == ReferenceFamily::IBqSech2
             ? KernelSpec::exponential()
             : KernelSpec::double_exponential_symbol(1.0, 1.0);
}

Real ReferenceSolution::u_at(Real x, Real t) const {
  const Real s = sech(inverse_width_ * (x - speed_ * t));
  const Real s2 = s * s;
  return amplitude_ * (family_ == ReferenceFamily::IBqSech2 ? s2 : s2 * s2);
}

Real ReferenceSolution::v_at(Real x, Real t) const {
  // u_t = -c u_x for the traveling form.
  const Real arg = inverse_width_ * (x - speed_ * t);
  const Real s = sech(arg);
  const Real s2 = s * s;
  const int pow = family_ == ReferenceFamily::IBqSech2 ? 2 : 4;
  const Real shape = (pow == 2 ? s2 : s2 * s2) * std::tanh(arg);
  return pow * amplitude_ * inverse_width_ * speed_ * shape;
}

Real ReferenceSolution::paper_v_at(Real x) const {
  const Real arg = inverse_width_ * x;
  const Real s = sech(arg);
  const Real s2 = s * s;
  if (family_ == ReferenceFamily::IBqSech2) {
    return 0.5 * s2 * std::tanh(arg);
  }
  return 105.0 / std::pow(133.0, 1.5) * s2 * s2 * std::tanh(arg);
}

std::pair<PhysicalField, PhysicalField> reference_eval(
    const ReferenceSolution& ref, const Grid& grid, Real t) {
  if (t < 0) throw InvalidArgument("reference time must be >= 0");
  const auto& x = grid.nodes();
  PhysicalField u(x.size()), v(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    u[i] = ref.u_at(x[i], t);
    v[i] = ref.v_at(x[i], t);
  }
  return {std::move(u), std::move(v)};
}

Real calibrate_hbq_speed(const Grid& grid) {
  const KernelSpec kernel = KernelSpec::double_exponential_symbol(1.0, 1.0);
  const Real b = 1.0 / (2.0 * std::sqrt(13.0));
  PhysicalField phi(grid.n_points());
  for (Eigen::Index i = 0; i < phi.size(); ++i) {
    const Real s = sech(b * grid.nodes()[i]);
    phi[i] = kHbqAmplitude * s * s * s * s;
  }
  const SpectralField rhs_hat = convolve(
      kernel, grid, SpectralField(forward(grid, phi) + forward(grid, phi.square())));
  const PhysicalField h = inverse(grid, rhs_hat);
  const Real c2 = (phi * h).sum() / phi.square().sum();
  if (!(c2 > 0)) throw InvalidArgument("speed calibration produced c^2 <= 0");
  return std::sqrt(c2);
}

Real linf_distance(const PhysicalField& a, const PhysicalField& b) {
  if (a.size() != b.size()) {
    throw LengthMismatch("fields have different lengths");
  }
  return (a - b).abs().maxCoeff();
}

BlowupHypothesisReport blowup_hypothesis_check(const PhysicalField& phi,
                                               const PhysicalField& psi,
                                               const KernelSpec& kernel,
                                               const Grid& grid, int p,
                                               Real nu) {
  if (!(nu > 0)) throw InvalidArgument("nu must be positive");
  BlowupHypothesisReport report;
  report.initial_energy = energy(phi, psi, kernel, grid, p);
  report.energy_negative = report.initial_energy.total < 0;

  // s g(s) <= 2 nu s^2 + 2(1+2nu) G(s) with g(s) = s^p, G(s) = s^(p+1)/(p+1),
  // checked over the field's sampled values.
  report.pointwise_inequality_holds = true;
  Real worst_margin = std::numeric_limits<Real>::infinity();
  report.worst_point = 0;
  for (Eigen::Index i = 0; i < phi.size(); ++i) {
    const Real s = phi[i];
    const Real s_p1 = std::pow(std::abs(s), p + 1) * (s < 0 && p % 2 == 0 ? -1.0 : 1.0);
    const Real lhs = s_p1;  // s * s^p
    const Real rhs = 2.0 * nu * s * s + 2.0 * (1.0 + 2.0 * nu) * s_p1 / (p + 1);
    const Real tol = 1e-12 * std::max(1.0, std::abs(s_p1));
    const Real margin = rhs - lhs;
    if (margin < -tol) report.pointwise_inequality_holds = false;
    const Real norm_margin = margin / std::max(1.0, std::abs(s_p1));
    if (norm_margin < worst_margin) {
      worst_margin = norm_margin;
      report.worst_point = s;
    }
  }
  return report;
}

}  // namespace nlwave
