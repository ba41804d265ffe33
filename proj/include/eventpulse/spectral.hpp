#pragma once

#include <cstdint>
#include <vector>

#include "eventpulse/types.hpp"

namespace eventpulse {

// Daily attack (or summed-death) counts over days 0..span_days.
DailySeries bin_daily(const CitySeries& series, Weighting weighting = Weighting::Attacks);

// Subtracts the series mean. Applied before the STFT by default so DC
// leakage does not swamp the low-frequency band.
DailySeries demean(DailySeries series);

// w[k] = 0.54 - 0.46 cos(2 pi k / (size-1)), k = 0..size-1.
std::vector<double> hamming_window(std::size_t size);

// Sliding-window spectrogram: frames start at 0, hop, 2 hop, ...; each
// window_size-day segment is Hamming-windowed, zero-padded to fft_points
// and transformed. magnitudes_sq holds the one-sided |X|^2 (bins
// 0..fft_points/2, frequency k/fft_points cycles/day) with no interior-bin
// doubling. Frames are computed in parallel. Throws insufficient_data when
// the series is shorter than one window.
Spectrogram stft(const DailySeries& x, std::size_t window_size = 128,
                 std::size_t hop = 120, std::size_t fft_points = 128);

// Serial reference using the direct DFT; identical output contract to
// stft(). Kept for testing and benchmarking.
Spectrogram stft_reference(const DailySeries& x, std::size_t window_size = 128,
                           std::size_t hop = 120, std::size_t fft_points = 128);

// Least-squares growth of band-mean magnitude (sqrt of the stored |X|^2,
// averaged over bins with f_lo <= f <= f_hi) against frame time, in
// magnitude units per year. Needs >= 3 frames.
BandTrend band_growth(const Spectrogram& spec, double f_lo, double f_hi,
                      Band band = Band::Low);

// Default band edges in cycles/day: low is centered on one attack per
// hundred days, high covers intervals of two to ten days.
inline constexpr double kLowBandLo = 1.0 / 200.0;
inline constexpr double kLowBandHi = 1.0 / 50.0;
inline constexpr double kHighBandLo = 1.0 / 10.0;
inline constexpr double kHighBandHi = 1.0 / 2.0;

} // namespace eventpulse
