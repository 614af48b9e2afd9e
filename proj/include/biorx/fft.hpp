#pragma once

#include <complex>
#include <span>
#include <vector>

namespace biorx {

/// X_k = sum_n x_n exp(-2 pi i k n / N) for k = 0..N/2.
std::vector<std::complex<double>> real_dft(std::span<const double> x);

/// Inverse of real_dft including the 1/N factor; `half` holds bins 0..n/2.
std::vector<double> inverse_real_dft(std::span<const std::complex<double>> half, int n);

}  // namespace biorx
