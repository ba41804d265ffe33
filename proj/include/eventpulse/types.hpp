#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

namespace eventpulse {

// One geo-tagged incident. `day` is a day index relative to the dataset
// epoch (the earliest date in the input).
struct EventRecord {
  std::int64_t day = 0;
  double lat = 0.0;
  double lon = 0.0;
  std::int64_t deaths = 0;
};

struct City {
  std::string id;
  std::string name;
  std::string country;
  double lat = 0.0;
  double lon = 0.0;
  std::int64_t population = 0; // 0 = unknown
};

// Per-city event sequence with derived inter-event intervals and marks.
// Events are sorted ascending by day; intervals[i] = events[i+1].day -
// events[i].day. span_days is the observation window length T, which for
// clustered data is the dataset-wide window (common to all cities), not
// the city's own first-to-last gap.
struct CitySeries {
  City city;
  std::vector<EventRecord> events;
  std::vector<std::int64_t> intervals;
  std::vector<std::int64_t> deaths_per_attack;
  std::int64_t span_days = 0;
  std::size_t attack_count = 0;
};

struct ClusterReport {
  std::map<std::size_t, std::string> assignments; // event index -> city id
  double mean_distance_km = 0.0;
  double max_distance_km = 0.0;
};

// Exponential fit of non-negative samples. ci_upper is +infinity when the
// normal-approximation bound is undefined (n <= 4).
struct ExponentialFit {
  double mu_hat = 0.0;
  std::size_t n = 0;
  double ci_lower = 0.0;
  double ci_upper = 0.0;
};

struct PowerLawFit {
  double alpha = 0.0;
  std::int64_t x_min = 1;
  std::size_t n_tail = 0;
  double ks_distance = 0.0;
};

struct RegressionSummary {
  double slope = 0.0;
  double intercept = 0.0;
  double adj_r2 = 0.0;
  std::size_t k = 0; // sample size
  std::size_t v = 0; // variable count
};

enum class PredictiveMode { ML, CNML };

struct PredictiveDensity {
  PredictiveMode mode = PredictiveMode::ML;
  double mu = 0.0;     // sample mean of the observed data
  std::size_t n = 0;   // observed sample count (used by CNML)
};

enum class Weighting { Attacks, Deaths };

// Daily-binned series over days 0..span_days (length span_days + 1).
struct DailySeries {
  std::vector<double> counts;
  Weighting weighting = Weighting::Attacks;
};

struct Spectrogram {
  // magnitudes_sq[frame][bin] = |X(m, w_k)|^2, one-sided (no interior-bin
  // doubling applied).
  std::vector<std::vector<double>> magnitudes_sq;
  std::vector<std::int64_t> frame_starts; // day index of each frame start
  std::vector<double> freqs;              // cycles/day, k / fft_points
  std::size_t window_size = 128;
  std::size_t hop = 120;
  std::size_t fft_points = 128;
};

enum class Band { Low, High };

struct BandTrend {
  Band band = Band::Low;
  double f_lo = 0.0; // cycles/day
  double f_hi = 0.0;
  double growth_per_year = 0.0; // G: slope of band-mean magnitude per year
  double stderr_per_year = 0.0;
};

// Seeded synthetic-city generator parameters. Identical spec => identical
// output, independent of platform.
struct GeneratorSpec {
  std::uint64_t seed = 0;
  double mu = 1.0;            // mean inter-event interval, days
  double alpha = 2.5;         // power-law exponent for deaths
  std::int64_t x_min = 1;     // power-law tail cutoff
  std::int64_t span_days = 1; // observation window length
  double rate_ramp = 0.0;     // fractional rate increase across the span
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Smallest n with 1.96/sqrt(n) <= 0.2, i.e. ML estimation error below 20%.
inline constexpr std::size_t kDefaultMinEvents = 97;

} // namespace eventpulse
