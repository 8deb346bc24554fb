#include "nlwave/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace nlwave {

namespace {

void require_positive(Real value, const char* name) {
  if (!(value > 0) || !std::isfinite(value)) {
    std::ostringstream os;
    os << "kernel parameter " << name << " must be positive, got " << value;
    throw NonPositiveParameter(os.str());
  }
}

/// Default decay constant for (1+eta1 k^2+eta2 k^4)^-1 against r=4:
/// sup over t=k^2>=0 of (1+t)^2/(1+eta1 t+eta2 t^2), whose interior
/// stationary point is t* = (eta1-2)/(eta1-2 eta2).
Real double_exponential_c_bound(Real eta1, Real eta2) {
  Real best = std::max(1.0, 1.0 / eta2);
  const Real denom = eta1 - 2.0 * eta2;
  if (std::abs(denom) > 1e-300) {
    const Real t = (eta1 - 2.0) / denom;
    if (t > 0 && std::isfinite(t)) {
      const Real f = (1.0 + t) * (1.0 + t) / (1.0 + eta1 * t + eta2 * t * t);
      best = std::max(best, f);
    }
  }
  return best;
}

}  // namespace

std::string to_string(KernelFamily family) {
  switch (family) {
    case KernelFamily::Dirac: return "dirac";
    case KernelFamily::Exponential: return "exponential";
    case KernelFamily::DoubleExponential: return "double_exponential";
    case KernelFamily::SinModulated: return "sin_modulated";
    case KernelFamily::RationalMix: return "rational_mix";
    case KernelFamily::Tabulated: return "tabulated";
  }
  return "unknown";
}

KernelSpec::KernelSpec(KernelFamily family, Real r, Real c_bound)
    : family_(family), r_(r), c_bound_(c_bound) {}

KernelSpec KernelSpec::dirac() { return KernelSpec(KernelFamily::Dirac, 0.0, 1.0); }

KernelSpec KernelSpec::exponential() {
  return KernelSpec(KernelFamily::Exponential, 2.0, 1.0);
}

KernelSpec KernelSpec::double_exponential(Real c1, Real c2) {
  require_positive(c1, "c1");
  require_positive(c2, "c2");
  const Real eta1 = c1 * c1 + c2 * c2;
  const Real eta2 = c1 * c1 * c2 * c2;
  KernelSpec k(KernelFamily::DoubleExponential, 4.0,
               double_exponential_c_bound(eta1, eta2));
  k.params_ = {{"c1", c1}, {"c2", c2}, {"eta1", eta1}, {"eta2", eta2}};
  return k;
}

KernelSpec KernelSpec::double_exponential_symbol(Real eta1, Real eta2) {
  require_positive(eta1, "eta1");
  require_positive(eta2, "eta2");
  KernelSpec k(KernelFamily::DoubleExponential, 4.0,
               double_exponential_c_bound(eta1, eta2));
  k.params_ = {{"eta1", eta1}, {"eta2", eta2}};
  return k;
}

KernelSpec KernelSpec::sin_modulated(Real eta) {
  require_positive(eta, "eta");
  // For eta < 1 the denominator is >= 1+(1-eta)k^2, so r=2 holds with
  // C = 1/(1-eta). At eta >= 1 the denominator dips to O(1) at sin(k^2) = -1
  // and only the r=0 bound survives (exactly C=1 at eta=1).
  const Real r = (eta < 1.0) ? 2.0 : 0.0;
  const Real c = (eta < 1.0) ? 1.0 / (1.0 - eta) : 1.0;
  KernelSpec k(KernelFamily::SinModulated, r, c);
  k.params_ = {{"eta", eta}};
  return k;
}

KernelSpec KernelSpec::rational_mix(Real mu) {
  require_positive(mu, "mu");
  // Component bounds against r=4: 4/3 for the first term, 2*mu for the second.
  KernelSpec k(KernelFamily::RationalMix, 4.0, 4.0 / 3.0 + 2.0 * mu);
  k.params_ = {{"mu", mu}};
  return k;
}

KernelSpec KernelSpec::tabulated(std::vector<Real> k_samples,
                                 std::vector<Real> symbol_samples, Real r,
                                 Real c_bound) {
  if (k_samples.size() != symbol_samples.size() || k_samples.size() < 2) {
    throw InvalidArgument("tabulated kernel needs matching sample arrays of size >= 2");
  }
  if (!(r >= 0) || !std::isfinite(r)) {
    throw InvalidArgument("tabulated kernel decay order r must be >= 0");
  }
  require_positive(c_bound, "c_bound");
  for (std::size_t i = 0; i < k_samples.size(); ++i) {
    if (!std::isfinite(k_samples[i]) || !std::isfinite(symbol_samples[i])) {
      throw InvalidArgument("tabulated kernel has non-finite samples");
    }
    if (i == 0) {
      if (k_samples[0] < 0) throw InvalidArgument("tabulated k samples must be >= 0");
    } else if (!(k_samples[i] > k_samples[i - 1])) {
      throw InvalidArgument("tabulated k samples must be strictly increasing");
    }
  }
  // Admissibility gate at load: every sample must satisfy the claimed bound.
  for (std::size_t i = 0; i < k_samples.size(); ++i) {
    const Real bound =
        c_bound * std::pow(1.0 + k_samples[i] * k_samples[i], -r / 2.0);
    if (symbol_samples[i] < -1e-12 * c_bound ||
        symbol_samples[i] > bound * (1.0 + 1e-9)) {
      std::ostringstream os;
      os << "tabulated symbol violates the decay condition at k = "
         << k_samples[i] << " (value " << symbol_samples[i] << ", bound "
         << bound << ")";
      throw DecayViolation(os.str());
    }
  }
  KernelSpec k(KernelFamily::Tabulated, r, c_bound);
  auto table = std::make_shared<Table>();
  table->k = std::move(k_samples);
  table->value = std::move(symbol_samples);
  k.table_ = std::move(table);
  return k;
}

KernelSpec KernelSpec::with_decay(Real r, Real c_bound) const {
  if (!(r >= 0) || !std::isfinite(r)) {
    throw InvalidArgument("decay order r must be >= 0");
  }
  require_positive(c_bound, "c_bound");
  KernelSpec copy = *this;
  copy.r_ = r;
  copy.c_bound_ = c_bound;
  return copy;
}

Real KernelSpec::beta_hat(Real k) const {
  if (!std::isfinite(k)) throw InvalidArgument("wavenumber must be finite");
  const Real k2 = k * k;
  switch (family_) {
    case KernelFamily::Dirac:
      return 1.0;
    case KernelFamily::Exponential:
      return 1.0 / (1.0 + k2);
    case KernelFamily::DoubleExponential: {
      const Real eta1 = params_.at("eta1");
      const Real eta2 = params_.at("eta2");
      return 1.0 / (1.0 + eta1 * k2 + eta2 * k2 * k2);
    }
    case KernelFamily::SinModulated: {
      const Real eta = params_.at("eta");
      return 1.0 / (1.0 + k2 + eta * k2 * std::sin(k2));
    }
    case KernelFamily::RationalMix: {
      const Real mu = params_.at("mu");
      const Real k4 = k2 * k2;
      return 1.0 / (1.0 + k2 + k4) + mu / (1.0 + k4);
    }
    case KernelFamily::Tabulated: {
      const Real a = std::abs(k);
      const auto& ks = table_->k;
      const auto& vs = table_->value;
      if (a < ks.front() - 1e-12 || a > ks.back() + 1e-12) {
        std::ostringstream os;
        os << "|k| = " << a << " outside tabulated range [" << ks.front()
           << ", " << ks.back() << "]";
        throw OutOfTableRange(os.str());
      }
      const Real ac = std::clamp(a, ks.front(), ks.back());
      auto hi = std::upper_bound(ks.begin(), ks.end(), ac);
      if (hi == ks.begin()) return vs.front();
      if (hi == ks.end()) return vs.back();
      const std::size_t i = static_cast<std::size_t>(hi - ks.begin());
      const Real t = (ac - ks[i - 1]) / (ks[i] - ks[i - 1]);
      return vs[i - 1] + t * (vs[i] - vs[i - 1]);
    }
  }
  throw InvalidArgument("unknown kernel family");
}

PhysicalField KernelSpec::beta_hat(const PhysicalField& k) const {
  PhysicalField out(k.size());
  for (Eigen::Index i = 0; i < k.size(); ++i) out[i] = beta_hat(k[i]);
  return out;
}

Real KernelSpec::param(const std::string& name) const {
  auto it = params_.find(name);
  if (it == params_.end()) {
    throw InvalidArgument("kernel " + describe() + " has no parameter '" +
                          name + "'");
  }
  return it->second;
}

std::string KernelSpec::describe() const {
  std::ostringstream os;
  os << to_string(family_);
  if (!params_.empty()) {
    os << "(";
    bool first = true;
    for (const auto& [name, value] : params_) {
      if (!first) os << ", ";
      os << name << "=" << value;
      first = false;
    }
    os << ")";
  }
  return os.str();
}

bool KernelSpec::requires_positivity_scan() const {
  return family_ == KernelFamily::SinModulated && params_.at("eta") >= 1.0;
}

DecayReport verify_decay_condition(const KernelSpec& kernel, Real k_max,
                                   int n_samples) {
  if (!(k_max > 0)) throw InvalidArgument("k_max must be positive");
  if (n_samples < 2) throw InvalidArgument("n_samples must be >= 2");

  DecayReport report;
  report.holds = true;
  report.worst_ratio = -std::numeric_limits<Real>::infinity();
  const Real neg_tol = -1e-12 * std::max(1.0, kernel.c_bound());
  for (int i = 0; i < n_samples; ++i) {
    const Real k = k_max * static_cast<Real>(i) / (n_samples - 1);
    const Real b = kernel.beta_hat(k);
    const Real ratio =
        b * std::pow(1.0 + k * k, kernel.r() / 2.0) / kernel.c_bound();
    if (!std::isfinite(b)) {
      report.holds = false;
      report.worst_k = k;
      report.worst_ratio = std::numeric_limits<Real>::infinity();
      return report;
    }
    if (ratio > report.worst_ratio) {
      report.worst_ratio = ratio;
      report.worst_k = k;
    }
    if (b < neg_tol || ratio > 1.0 + 1e-9) report.holds = false;
  }
  return report;
}

Real sup_symbol(const KernelSpec& kernel, const Grid& grid) {
  return kernel.beta_hat(grid.phys_wavenumbers()).maxCoeff();
}

void ensure_positive_on_grid(const KernelSpec& kernel, const Grid& grid) {
  if (!kernel.requires_positivity_scan()) return;
  const Real eta = kernel.param("eta");
  const auto& kappa = grid.phys_wavenumbers();
  for (Eigen::Index i = 0; i < kappa.size(); ++i) {
    const Real k2 = kappa[i] * kappa[i];
    const Real denom = 1.0 + k2 + eta * k2 * std::sin(k2);
    if (!(denom > 0) || !std::isfinite(denom)) {
      std::ostringstream os;
      os << "sin-modulated symbol denominator is " << denom
         << " at grid wavenumber " << kappa[i] << " (eta = " << eta
         << "); reduce N or eta so all sampled k^2 stay where the symbol is "
            "positive";
      throw NonPositiveSymbol(os.str());
    }
  }
}

}  // namespace nlwave
