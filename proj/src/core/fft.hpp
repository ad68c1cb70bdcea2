#pragma once

#include <complex>
#include <vector>

namespace ccr::fft {

/// Forward real transform, normalized so that c[l] is the Fourier coefficient
/// of e^{2 pi i l x}: c[l] = (1/m) sum_j f_j e^{-2 pi i j l / m}, l = 0..m/2.
std::vector<std::complex<double>> forward(const std::vector<double>& samples);

/// Inverse of `forward` on a grid of size m (m >= 2*(coeffs.size()-1)).
std::vector<double> inverse(const std::vector<std::complex<double>>& coeffs, int m);

bool is_pow2(int m);
int next_pow2(int m);

}  // namespace ccr::fft
