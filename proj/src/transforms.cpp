#include "nlwave/transforms.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <sstream>

namespace nlwave {

namespace {

// One engine per thread; Eigen::FFT caches plans per transform size, and
// separate engines make concurrent transforms safe.
Eigen::FFT<Real>& engine() {
  thread_local Eigen::FFT<Real> fft;
  return fft;
}

void check_length(const Grid& grid, Eigen::Index n, const char* what) {
  if (n != grid.n_points()) {
    std::ostringstream os;
    os << what << " has length " << n << ", grid expects " << grid.n_points();
    throw LengthMismatch(os.str());
  }
}

}  // namespace

SpectralField forward(const Grid& grid, const PhysicalField& f) {
  check_length(grid, f.size(), "field");
  const int n = grid.n_points();
  Eigen::VectorXcd in(n), out(n);
  for (int j = 0; j < n; ++j) in[j] = Complex(f[j], 0.0);
  engine().fwd(out, in);
  return out.array() * (grid.phase() / static_cast<Real>(n)).cast<Complex>();
}

Eigen::ArrayXcd inverse_complex(const Grid& grid, const SpectralField& F) {
  check_length(grid, F.size(), "spectral field");
  const int n = grid.n_points();
  Eigen::VectorXcd in = (F * grid.phase().cast<Complex>()).matrix();
  Eigen::VectorXcd out(n);
  engine().inv(out, in);
  return out.array() * static_cast<Real>(n);
}

PhysicalField inverse(const Grid& grid, const SpectralField& F, Real imag_tol) {
  const Eigen::ArrayXcd w = inverse_complex(grid, F);
  const Real imag_max = w.imag().abs().maxCoeff();
  const Real real_max = w.real().abs().maxCoeff();
  if (imag_max > imag_tol * std::max(real_max, 1e-300)) {
    std::ostringstream os;
    os << "inverse transform is not real: max imaginary part " << imag_max
       << " against real magnitude " << real_max;
    throw NonRealResult(os.str());
  }
  return w.real();
}

SpectralField spectral_derivative(const Grid& grid, const SpectralField& F,
                                  int order) {
  check_length(grid, F.size(), "spectral field");
  if (order < 1) throw InvalidArgument("derivative order must be >= 1");
  const auto& kappa = grid.phys_wavenumbers();
  SpectralField out(F.size());
  for (Eigen::Index i = 0; i < F.size(); ++i) {
    out[i] = std::pow(Complex(0.0, kappa[i]), order) * F[i];
  }
  if (order % 2 == 1) out[grid.nyquist_index()] = Complex(0.0, 0.0);
  return out;
}

SpectralField convolve(const KernelSpec& kernel, const Grid& grid,
                       const SpectralField& F) {
  check_length(grid, F.size(), "spectral field");
  return F * kernel.beta_hat(grid.phys_wavenumbers()).cast<Complex>();
}

PhysicalField translate(const Grid& grid, const PhysicalField& f, Real shift) {
  SpectralField F = forward(grid, f);
  const auto& kappa = grid.phys_wavenumbers();
  const int ny = grid.nyquist_index();
  for (Eigen::Index i = 0; i < F.size(); ++i) {
    if (i == ny) continue;
    F[i] *= std::exp(Complex(0.0, -kappa[i] * shift));
  }
  // The unpaired Nyquist mode cannot carry a complex phase and stay real;
  // project its translate back onto the representable cosine component.
  F[ny] = Complex(F[ny].real() * std::cos(kappa[ny] * shift), 0.0);
  return inverse(grid, F);
}

Real max_conjugate_asymmetry(const Grid& grid, const SpectralField& F) {
  check_length(grid, F.size(), "spectral field");
  const int n = grid.n_points();
  Real worst = std::abs(F[0].imag());
  worst = std::max(worst, std::abs(F[n / 2].imag()));
  for (int k = 1; k < n / 2; ++k) {
    worst = std::max(worst, std::abs(F[k] - std::conj(F[n - k])));
  }
  return worst;
}

PhysicalField int_power(const PhysicalField& f, int p) {
  if (p < 1) throw InvalidArgument("integer power must be >= 1");
  if (p == 1) return f;
  if (p == 2) return f.square();
  if (p == 3) return f.cube();
  PhysicalField out = f;
  for (int i = 1; i < p; ++i) out *= f;
  return out;
}

}  // namespace nlwave
