#pragma once

#include "nlwave/errors.hpp"
#include "nlwave/types.hpp"

namespace nlwave {

/// Uniform periodic grid on [-L, L) with N nodes x_j = -L + j*(2L/N) and the
/// matching trigonometric wave space k in {-N/2, ..., N/2-1}. Coefficients are
/// kept in FFT index order; `phase` carries the (-1)^k factor that maps the
/// standard DFT of samples starting at -L onto coefficients of exp(i*pi*k*x/L).
/// Immutable after construction; safe to share across threads.
class Grid {
 public:
  Grid(Real half_length, int n_points);

  Real half_length() const { return half_length_; }
  int n_points() const { return n_points_; }
  Real dx() const { return dx_; }

  const PhysicalField& nodes() const { return nodes_; }
  const Eigen::ArrayXi& wave_indices() const { return wave_indices_; }
  /// kappa_k = pi*k/L, FFT index order.
  const PhysicalField& phys_wavenumbers() const { return phys_wavenumbers_; }
  const PhysicalField& phase() const { return phase_; }

  /// Storage index of wave number k in {-N/2, ..., N/2-1}.
  int index_of(int k) const;
  int nyquist_index() const { return n_points_ / 2; }

 private:
  Real half_length_;
  int n_points_;
  Real dx_;
  PhysicalField nodes_;
  Eigen::ArrayXi wave_indices_;
  PhysicalField phys_wavenumbers_;
  PhysicalField phase_;
};

}  // namespace nlwave
