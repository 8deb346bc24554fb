#include "nlwave/grid.hpp"

#include <cmath>

namespace nlwave {

Grid::Grid(Real half_length, int n_points)
    : half_length_(half_length), n_points_(n_points) {
  if (!(half_length > 0) || !std::isfinite(half_length)) {
    throw InvalidArgument("grid half-length must be positive and finite");
  }
  if (n_points < 4 || n_points % 2 != 0) {
    throw InvalidArgument("grid size must be even and at least 4, got " +
                          std::to_string(n_points));
  }
  dx_ = 2.0 * half_length_ / n_points_;

  nodes_.resize(n_points_);
  wave_indices_.resize(n_points_);
  phys_wavenumbers_.resize(n_points_);
  phase_.resize(n_points_);
  const Real pi_over_l = M_PI / half_length_;
  for (int i = 0; i < n_points_; ++i) {
    nodes_[i] = -half_length_ + i * dx_;
    const int k = (i < n_points_ / 2) ? i : i - n_points_;
    wave_indices_[i] = k;
    phys_wavenumbers_[i] = pi_over_l * k;
    phase_[i] = (k & 1) ? -1.0 : 1.0;
  }
}

int Grid::index_of(int k) const {
  if (k < -n_points_ / 2 || k >= n_points_ / 2) {
    throw InvalidArgument("wave index " + std::to_string(k) +
                          " outside [-N/2, N/2-1] for N = " +
                          std::to_string(n_points_));
  }
  return (k >= 0) ? k : k + n_points_;
}

}  // namespace nlwave
