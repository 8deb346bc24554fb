#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "nlwave/grid.hpp"
#include "nlwave/types.hpp"

namespace nlwave {

enum class KernelFamily {
  Dirac,
  Exponential,
  DoubleExponential,
  SinModulated,
  RationalMix,
  Tabulated,
};

std::string to_string(KernelFamily family);

/// A convolution kernel represented by its Fourier symbol beta_hat(k),
/// together with the claimed decay metadata (r, C) of
///   0 <= beta_hat(k) <= C (1+k^2)^(-r/2).
/// Immutable after construction; evaluation is thread-safe.
///
/// Closed forms:
///   Dirac              beta_hat = 1
///   Exponential        beta_hat = (1+k^2)^-1
///   DoubleExponential  beta_hat = (1+eta1 k^2 + eta2 k^4)^-1,
///                      eta1 = c1^2+c2^2, eta2 = c1^2 c2^2 when built from (c1,c2)
///   SinModulated       beta_hat = (1 + k^2 + eta k^2 sin(k^2))^-1
///   RationalMix        beta_hat = (1+k^2+k^4)^-1 + mu (1+k^4)^-1
///   Tabulated          linear interpolation of (k, beta_hat) samples,
///                      mirrored to negative k by evenness
class KernelSpec {
 public:
  static KernelSpec dirac();
  static KernelSpec exponential();
  static KernelSpec double_exponential(Real c1, Real c2);
  /// Symbol specified directly by (eta1, eta2); the (c1, c2) parameterization
  /// cannot reach eta1 < 2*sqrt(eta2).
  static KernelSpec double_exponential_symbol(Real eta1, Real eta2);
  static KernelSpec sin_modulated(Real eta);
  static KernelSpec rational_mix(Real mu);
  /// Samples must have strictly increasing k >= 0; the decay bound given by
  /// (r, c_bound) is checked at every sample before the kernel can be used.
  static KernelSpec tabulated(std::vector<Real> k_samples,
                              std::vector<Real> symbol_samples, Real r,
                              Real c_bound);

  /// Same kernel with the claimed decay metadata replaced.
  KernelSpec with_decay(Real r, Real c_bound) const;

  Real beta_hat(Real k) const;
  PhysicalField beta_hat(const PhysicalField& k) const;

  KernelFamily family() const { return family_; }
  Real r() const { return r_; }
  Real c_bound() const { return c_bound_; }
  /// Named family parameter (eta, mu, c1, c2, eta1, eta2).
  Real param(const std::string& name) const;
  const std::map<std::string, Real>& params() const { return params_; }
  std::string describe() const;

  /// The sinusoidal family with eta >= 1 must pass a grid positivity scan
  /// before it may drive a solve or an evolution.
  bool requires_positivity_scan() const;

 private:
  KernelSpec(KernelFamily family, Real r, Real c_bound);

  struct Table {
    std::vector<Real> k;
    std::vector<Real> value;
  };

  KernelFamily family_;
  Real r_;
  Real c_bound_;
  std::map<std::string, Real> params_;
  std::shared_ptr<const Table> table_;
};

struct DecayReport {
  bool holds = false;
  Real worst_k = 0;
  Real worst_ratio = 0;  // max over samples of beta_hat(k)*(1+k^2)^(r/2)/c_bound
};

/// Samples k uniformly on [0, k_max] and checks
/// 0 <= beta_hat(k) <= c_bound (1+k^2)^(-r/2). Failure is encoded in the
/// report, never thrown.
DecayReport verify_decay_condition(const KernelSpec& kernel, Real k_max,
                                   int n_samples);

/// max over the grid's physical wavenumbers of beta_hat.
Real sup_symbol(const KernelSpec& kernel, const Grid& grid);

/// Positivity scan over the grid wavenumbers for kernels that need it
/// (SinModulated with eta >= 1). A nonpositive or non-finite symbol value is
/// a hard error.
void ensure_positive_on_grid(const KernelSpec& kernel, const Grid& grid);

}  // namespace nlwave
