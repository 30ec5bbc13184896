#pragma once

#include <complex>
#include <vector>

namespace modloc::detail {

// Unnormalized forward DFT X_k = sum_j x_j e^{-2 pi i jk/n}; inverse includes 1/n.
std::vector<std::complex<double>> dft(const std::vector<std::complex<double>>& x);
std::vector<std::complex<double>> idft(const std::vector<std::complex<double>>& x);

// Angular frequencies k_m = 2 pi fftfreq(n, d).
std::vector<double> angular_frequencies(int n, double d);

}  // namespace modloc::detail
