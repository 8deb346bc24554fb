#pragma once

#include <Eigen/Dense>
#include <complex>

namespace nlwave {

using Real = double;
using Complex = std::complex<double>;

/// Nodal values of a real field on a Grid.
using PhysicalField = Eigen::ArrayXd;

/// DFT coefficients in FFT index order (k = 0..N/2-1, -N/2..-1).
/// Fields representing real data satisfy coeffs(-k) = conj(coeffs(k)).
using SpectralField = Eigen::ArrayXcd;

}  // namespace nlwave
