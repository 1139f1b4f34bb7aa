#pragma once

#include <complex>
#include <vector>

namespace glare {

/// Forward 2-D DFT of a row-major real array (h rows of w).
std::vector<std::complex<double>> fft2(const std::vector<double>& data, int w, int h);

/// Inverse 2-D DFT, returning the real part scaled by 1/(w*h).
std::vector<double> ifft2_real(const std::vector<std::complex<double>>& spec, int w, int h);

}  // namespace glare
