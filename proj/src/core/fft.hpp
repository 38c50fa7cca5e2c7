#pragma once

#include <complex>
#include <span>
#include <vector>

namespace mhht::fft {

// Unnormalized complex DFT, sign -1 forward and +1 inverse. Thread-safe.
std::vector<std::complex<double>> forward(std::span<const std::complex<double>> in);
std::vector<std::complex<double>> inverse(std::span<const std::complex<double>> in);

}  // namespace mhht::fft
