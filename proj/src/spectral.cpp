#include "eventpulse/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include "eventpulse/errors.hpp"
#include "eventpulse/fft.hpp"

namespace eventpulse {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kDaysPerYear = 365.25;

Spectrogram stft_impl(const DailySeries& x, std::size_t window_size, std::size_t hop,
                      std::size_t fft_points, bool use_fft) {
  if (window_size < 2) throw std::invalid_argument("stft: window_size must be >= 2");
  if (hop < 1) throw std::invalid_argument("stft: hop must be >= 1");
  if (fft_points < window_size) {
    throw std::invalid_argument("stft: fft_points must be >= window_size");
  }
  const std::size_t len = x.counts.size();
  if (len < window_size) {
    throw insufficient_data("stft: series length " + std::to_string(len) +
                            " is shorter than one window (need >= " +
                            std::to_string(window_size) + " days)");
  }

  const std::size_t n_frames = (len - window_size) / hop + 1;
  const std::size_t n_bins = fft_points / 2 + 1;
  const std::vector<double> window = hamming_window(window_size);

  Spectrogram spec;
  spec.window_size = window_size;
  spec.hop = hop;
  spec.fft_points = fft_points;
  spec.magnitudes_sq.assign(n_frames, std::vector<double>(n_bins, 0.0));
  spec.frame_starts.resize(n_frames);
  spec.freqs.resize(n_bins);
  for (std::size_t k = 0; k < n_bins; ++k) {
    spec.freqs[k] = static_cast<double>(k) / static_cast<double>(fft_points);
  }

  const bool radix2 = use_fft && is_power_of_two(fft_points);

#pragma omp parallel for schedule(static)
  for (std::int64_t m = 0; m < static_cast<std::int64_t>(n_frames); ++m) {
    const std::size_t start = static_cast<std::size_t>(m) * hop;
    std::vector<std::complex<double>> frame(fft_points, {0.0, 0.0});
    for (std::size_t k = 0; k < window_size; ++k) {
      frame[k] = x.counts[start + k] * window[k];
    }
    if (radix2) {
      fft_radix2(frame);
    } else {
      frame = dft_reference(frame);
    }
    spec.frame_starts[m] = static_cast<std::int64_t>(start);
    for (std::size_t k = 0; k < n_bins; ++k) {
      spec.magnitudes_sq[m][k] = std::norm(frame[k]);
    }
  }
  return spec;
}

} // namespace

DailySeries bin_daily(const CitySeries& series, Weighting weighting) {
  if (series.events.empty()) throw std::invalid_argument("bin_daily: empty series");
  DailySeries out;
  out.weighting = weighting;
  out.counts.assign(static_cast<std::size_t>(series.span_days) + 1, 0.0);
  for (const auto& ev : series.events) {
    if (ev.day < 0 || ev.day > series.span_days) {
      throw std::invalid_argument("bin_daily: event day outside [0, span_days]");
    }
    out.counts[static_cast<std::size_t>(ev.day)] +=
        weighting == Weighting::Attacks ? 1.0 : static_cast<double>(ev.deaths);
  }
  return out;
}

DailySeries demean(DailySeries series) {
  if (series.counts.empty()) return series;
  double mean = 0.0;
  for (double c : series.counts) mean += c;
  mean /= static_cast<double>(series.counts.size());
  for (double& c : series.counts) c -= mean;
  return series;
}

std::vector<double> hamming_window(std::size_t size) {
  if (size < 2) throw std::invalid_argument("hamming_window: size must be >= 2");
  std::vector<double> w(size);
  for (std::size_t k = 0; k < size; ++k) {
    w[k] = 0.54 - 0.46 * std::cos(2.0 * kPi * static_cast<double>(k) /
                                  static_cast<double>(size - 1));
  }
  return w;
}

Spectrogram stft(const DailySeries& x, std::size_t window_size, std::size_t hop,
                 std::size_t fft_points) {
  return stft_impl(x, window_size, hop, fft_points, true);
}

Spectrogram stft_reference(const DailySeries& x, std::size_t window_size, std::size_t hop,
                           std::size_t fft_points) {
  return stft_impl(x, window_size, hop, fft_points, false);
}

BandTrend band_growth(const Spectrogram& spec, double f_lo, double f_hi, Band band) {
  if (!(f_lo >= 0.0 && f_hi > f_lo)) {
    throw std::invalid_argument("band_growth: need 0 <= f_lo < f_hi");
  }
  if (spec.freqs.empty() || f_hi > spec.freqs.back() + 1e-12) {
    throw std::invalid_argument("band_growth: band outside spectrogram frequency range");
  }
  const std::size_t n_frames = spec.magnitudes_sq.size();
  if (n_frames < 3) throw insufficient_data("band_growth: need at least 3 frames");

  std::vector<std::size_t> bins;
  for (std::size_t k = 0; k < spec.freqs.size(); ++k) {
    if (spec.freqs[k] >= f_lo - 1e-12 && spec.freqs[k] <= f_hi + 1e-12) bins.push_back(k);
  }
  if (bins.empty()) throw std::invalid_argument("band_growth: band contains no frequency bins");

  // Band-mean magnitude per frame vs frame center time in years.
  std::vector<double> t(n_frames);
  std::vector<double> y(n_frames);
  for (std::size_t m = 0; m < n_frames; ++m) {
    double s = 0.0;
    for (std::size_t k : bins) s += std::sqrt(spec.magnitudes_sq[m][k]);
    y[m] = s / static_cast<double>(bins.size());
    t[m] = (static_cast<double>(spec.frame_starts[m]) +
            0.5 * static_cast<double>(spec.window_size)) /
           kDaysPerYear;
  }

  double tbar = 0.0;
  double ybar = 0.0;
  for (std::size_t m = 0; m < n_frames; ++m) {
    tbar += t[m];
    ybar += y[m];
  }
  tbar /= static_cast<double>(n_frames);
  ybar /= static_cast<double>(n_frames);
  double stt = 0.0;
  double sty = 0.0;
  for (std::size_t m = 0; m < n_frames; ++m) {
    stt += (t[m] - tbar) * (t[m] - tbar);
    sty += (t[m] - tbar) * (y[m] - ybar);
  }
  const double slope = sty / stt;
  double sse = 0.0;
  for (std::size_t m = 0; m < n_frames; ++m) {
    const double e = y[m] - (ybar + slope * (t[m] - tbar));
    sse += e * e;
  }
  const double se = std::sqrt(sse / (static_cast<double>(n_frames) - 2.0) / stt);

  BandTrend trend;
  trend.band = band;
  trend.f_lo = f_lo;
  trend.f_hi = f_hi;
  trend.growth_per_year = slope;
  trend.stderr_per_year = se;
  return trend;
}

} // namespace eventpulse
