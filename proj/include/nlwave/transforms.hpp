#pragma once

#include "nlwave/grid.hpp"
#include "nlwave/kernels.hpp"
#include "nlwave/types.hpp"

namespace nlwave {

/// Forward DFT of a real field with the normalization
///   u_hat_k = (1/N) sum_j f(x_j) exp(-i kappa_k x_j),
/// so the k=0 coefficient equals the field mean.
SpectralField forward(const Grid& grid, const PhysicalField& f);

/// Inverse of `forward`. An imaginary residue above `imag_tol` relative to the
/// real magnitude is an error; below it is discarded.
PhysicalField inverse(const Grid& grid, const SpectralField& F,
                      Real imag_tol = 1e-10);

/// Inverse without the realness check (the raw complex synthesis).
Eigen::ArrayXcd inverse_complex(const Grid& grid, const SpectralField& F);

/// Multiplication by (i*kappa)^order. Odd orders zero the k=-N/2 mode so the
/// result of a real field stays real.
SpectralField spectral_derivative(const Grid& grid, const SpectralField& F,
                                  int order);

/// H v = beta * v realized as coeffs(k) <- beta_hat(kappa_k) coeffs(k).
SpectralField convolve(const KernelSpec& kernel, const Grid& grid,
                       const SpectralField& F);

/// f(x) -> f(x - shift), spectrally exact for grid-resolved fields.
PhysicalField translate(const Grid& grid, const PhysicalField& f, Real shift);

/// max_k |coeffs(-k) - conj(coeffs(k))| plus the imaginary content of the
/// self-paired k=0 and k=-N/2 modes. Diagnostic for tests and invariants.
Real max_conjugate_asymmetry(const Grid& grid, const SpectralField& F);

/// Elementwise integer power, exact sign handling for negative bases.
PhysicalField int_power(const PhysicalField& f, int p);

}  // namespace nlwave
