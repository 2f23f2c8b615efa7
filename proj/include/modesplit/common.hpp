#pragma once

#include <complex>

namespace modesplit {

using cplx = std::complex<double>;

// Tolerance for normalization and numerical-equality checks.
inline constexpr double kNormTol = 1e-10;

// Singular values below this are treated as zero when ranking Schmidt spectra.
inline constexpr double kRankTol = 1e-9;

// Largest particle number for which dense first-quantization vectors (2^N
// amplitudes, or 4^N with a mode label per particle) are allowed.
inline constexpr int kMaxDenseParticles = 14;

// Integer power by repeated multiplication. Avoids the platform-dependent
// branch cuts and rounding of std::pow on complex arguments.
inline cplx ipow(cplx base, int exponent) {
  cplx out{1.0, 0.0};
  for (int k = 0; k < exponent; ++k) out *= base;
  return out;
}

}  // namespace modesplit
