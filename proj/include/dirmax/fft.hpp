#pragma once

// Thin wrappers over FFTW for row-major 2-D arrays of nx columns by ny rows.

#include <complex>
#include <vector>

namespace dirmax {

using cplx = std::complex<double>;

/// Real-to-half-complex transform; result has ny rows of nx/2 + 1 entries.
std::vector<cplx> rfft2(const std::vector<double>& in, int nx, int ny);
/// Inverse of rfft2, scaled by 1/(nx ny).
std::vector<double> irfft2(const std::vector<cplx>& in, int nx, int ny);

/// Full complex transforms; the inverse is scaled by 1/(nx ny).
std::vector<cplx> fft2(const std::vector<cplx>& in, int nx, int ny);
std::vector<cplx> ifft2(const std::vector<cplx>& in, int nx, int ny);

/// Angular frequency of DFT bin k on an n-point lattice with step h,
/// mapped to (-pi/h, pi/h].
double bin_frequency(int k, int n, double h);

}  // namespace dirmax
