#pragma once

#include <complex>
#include <vector>

namespace eventpulse {

bool is_power_of_two(std::size_t n);

// In-place iterative radix-2 Cooley-Tukey; a.size() must be a power of two.
void fft_radix2(std::vector<std::complex<double>>& a);

// O(n^2) direct DFT, any size. Serial reference used by tests, benchmarks
// and as the fallback for non power-of-two transform lengths.
std::vector<std::complex<double>> dft_reference(const std::vector<std::complex<double>>& a);

} // namespace eventpulse
