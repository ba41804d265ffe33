#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "eventpulse/errors.hpp"
#include "eventpulse/fft.hpp"
#include "eventpulse/ingest.hpp"
#include "eventpulse/rng.hpp"
#include "eventpulse/spectral.hpp"
#include "eventpulse/synth.hpp"

using namespace eventpulse;

namespace {

constexpr double kPi = 3.14159265358979323846;

DailySeries make_series(std::vector<double> counts) {
  DailySeries s;
  s.counts = std::move(counts);
  return s;
}

City origin_city(std::string id) {
  City c;
  c.id = std::move(id);
  return c;
}

} // namespace

TEST_CASE("bin_daily counts attacks and deaths per day") {
  std::vector<EventRecord> events = {{0, 0, 0, 2}, {0, 0, 0, 5}, {3, 0, 0, 1}};
  const auto series = build_city_series(origin_city("x"), events);

  const auto attacks = bin_daily(series, Weighting::Attacks);
  CHECK(attacks.counts == std::vector<double>{2, 0, 0, 1});

  const auto deaths = bin_daily(series, Weighting::Deaths);
  CHECK(deaths.counts == std::vector<double>{7, 0, 0, 1});

  SUBCASE("same-day pair collapses to one bin") {
    std::vector<EventRecord> pair = {{0, 0, 0, 2}, {0, 0, 0, 5}};
    const auto s2 = build_city_series(origin_city("y"), pair);
    CHECK(bin_daily(s2, Weighting::Deaths).counts == std::vector<double>{7});
  }
}

TEST_CASE("bin_daily conserves totals") {
  SplitMix64 rng(21);
  std::vector<EventRecord> events;
  std::int64_t total_deaths = 0;
  for (int i = 0; i < 400; ++i) {
    const auto day = static_cast<std::int64_t>(rng.next_u64() % 900);
    const auto deaths = static_cast<std::int64_t>(rng.next_u64() % 30);
    events.push_back({day, 0.0, 0.0, deaths});
    total_deaths += deaths;
  }
  const auto series = build_city_series(origin_city("z"), events);
  double attack_sum = 0.0;
  for (double c : bin_daily(series, Weighting::Attacks).counts) attack_sum += c;
  CHECK(attack_sum == doctest::Approx(static_cast<double>(series.attack_count)));
  double death_sum = 0.0;
  for (double c : bin_daily(series, Weighting::Deaths).counts) death_sum += c;
  CHECK(death_sum == doctest::Approx(static_cast<double>(total_deaths)));
}

TEST_CASE("hamming window matches the closed form") {
  const auto w3 = hamming_window(3);
  REQUIRE(w3.size() == 3);
  CHECK(w3[0] == doctest::Approx(0.08).epsilon(1e-12));
  CHECK(w3[1] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(w3[2] == doctest::Approx(0.08).epsilon(1e-12));

  const auto w128 = hamming_window(128);
  CHECK(w128.front() == doctest::Approx(0.08).epsilon(1e-12));
  CHECK(w128.back() == doctest::Approx(0.08).epsilon(1e-12));
  const auto w9 = hamming_window(9);
  CHECK(*std::max_element(w9.begin(), w9.end()) == doctest::Approx(1.0));
  CHECK(w9[4] == doctest::Approx(1.0));

  CHECK_THROWS_AS(hamming_window(1), std::invalid_argument);
}

TEST_CASE("fft matches the direct dft") {
  SplitMix64 rng(3333);
  std::vector<std::complex<double>> a(128);
  for (auto& v : a) v = {rng.next_double() - 0.5, rng.next_double() - 0.5};
  auto b = a;
  fft_radix2(b);
  const auto ref = dft_reference(a);
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(std::abs(b[k] - ref[k]) < 1e-9);
  }
  std::vector<std::complex<double>> not_pow2(100);
  CHECK_THROWS_AS(fft_radix2(not_pow2), std::invalid_argument);
}

TEST_CASE("stft of a constant series puts the window energy in the DC bin") {
  const auto spec = stft(make_series(std::vector<double>(600, 1.0)));
  const auto w = hamming_window(128);
  double wsum = 0.0;
  for (double v : w) wsum += v;
  for (const auto& frame : spec.magnitudes_sq) {
    CHECK(frame[0] == doctest::Approx(wsum * wsum).epsilon(1e-6));
  }
}

TEST_CASE("stft frame geometry and frequencies") {
  const auto spec = stft(make_series(std::vector<double>(4678, 0.0)));
  // floor((4678 - 128) / 120) + 1
  CHECK(spec.magnitudes_sq.size() == 38);
  CHECK(spec.frame_starts.front() == 0);
  CHECK(spec.frame_starts[1] == 120);
  REQUIRE(spec.freqs.size() == 65);
  for (std::size_t k = 0; k < spec.freqs.size(); ++k) {
    CHECK(spec.freqs[k] == doctest::Approx(k / 128.0));
  }
  for (const auto& frame : spec.magnitudes_sq) {
    for (double m : frame) CHECK(m == 0.0);
  }
}

TEST_CASE("stft of a bin-aligned sinusoid peaks at its bin") {
  std::vector<double> x(640);
  for (std::size_t n = 0; n < x.size(); ++n) {
    x[n] = std::sin(2.0 * kPi * 8.0 * static_cast<double>(n) / 128.0);
  }
  const auto spec = stft(make_series(x));
  for (const auto& frame : spec.magnitudes_sq) {
    const auto peak = std::max_element(frame.begin(), frame.end());
    CHECK(peak - frame.begin() == 8);
  }
}

TEST_CASE("per-frame Parseval identity") {
  SplitMix64 rng(71);
  std::vector<double> x(1000);
  for (auto& v : x) v = rng.next_double() * 4.0;
  const auto series = make_series(x);
  const auto spec = stft(series);
  const auto w = hamming_window(128);

  for (std::size_t m = 0; m < spec.magnitudes_sq.size(); ++m) {
    const std::size_t start = static_cast<std::size_t>(spec.frame_starts[m]);
    double time_energy = 0.0;
    for (std::size_t k = 0; k < 128; ++k) {
      const double v = x[start + k] * w[k];
      time_energy += v * v;
    }
    // reconstruct the two-sided sum from the one-sided magnitudes
    double freq_energy = spec.magnitudes_sq[m][0] + spec.magnitudes_sq[m][64];
    for (std::size_t k = 1; k < 64; ++k) freq_energy += 2.0 * spec.magnitudes_sq[m][k];
    freq_energy /= 128.0;
    CHECK(freq_energy == doctest::Approx(time_energy).epsilon(1e-6));
  }
}

TEST_CASE("stft equals its serial reference") {
  SplitMix64 rng(72);
  std::vector<double> x(777);
  for (auto& v : x) v = rng.next_double() * 3.0 - 1.0;
  const auto series = make_series(x);
  const auto fast = stft(series, 64, 50, 128);
  const auto ref = stft_reference(series, 64, 50, 128);
  REQUIRE(fast.magnitudes_sq.size() == ref.magnitudes_sq.size());
  for (std::size_t m = 0; m < fast.magnitudes_sq.size(); ++m) {
    for (std::size_t k = 0; k < fast.magnitudes_sq[m].size(); ++k) {
      CHECK(fast.magnitudes_sq[m][k] ==
            doctest::Approx(ref.magnitudes_sq[m][k]).epsilon(1e-8).scale(1.0));
    }
  }
}

TEST_CASE("repeating blocks give repeating frames") {
  SplitMix64 rng(73);
  std::vector<double> block(240); // two hops of 120
  for (auto& v : block) v = rng.next_double();
  std::vector<double> x;
  for (int rep = 0; rep < 4; ++rep) x.insert(x.end(), block.begin(), block.end());

  const auto spec = stft(make_series(x));
  // frames 0 and 2 start 240 days apart and see identical content
  REQUIRE(spec.magnitudes_sq.size() >= 4);
  for (std::size_t k = 0; k < spec.magnitudes_sq[0].size(); ++k) {
    CHECK(spec.magnitudes_sq[0][k] == doctest::Approx(spec.magnitudes_sq[2][k]));
    CHECK(spec.magnitudes_sq[1][k] == doctest::Approx(spec.magnitudes_sq[3][k]));
  }
}

TEST_CASE("stft input validation") {
  CHECK_THROWS_AS(stft(make_series(std::vector<double>(100, 1.0))), insufficient_data);
  CHECK_THROWS_AS(stft(make_series(std::vector<double>(200, 1.0)), 128, 0, 128),
                  std::invalid_argument);
  CHECK_THROWS_AS(stft(make_series(std::vector<double>(200, 1.0)), 128, 120, 64),
                  std::invalid_argument);
}

TEST_CASE("demean removes the mean and raw mode keeps DC") {
  auto s = make_series({1.0, 2.0, 3.0, 6.0});
  const auto d = demean(s);
  double sum = 0.0;
  for (double v : d.counts) sum += v;
  CHECK(sum == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
}

TEST_CASE("band growth is flat for a homogeneous series and positive under a ramp") {
  City c = origin_city("bg");
  GeneratorSpec spec;
  spec.seed = 2024;
  spec.mu = 2.0;
  spec.span_days = 6000;

  SUBCASE("homogeneous") {
    spec.rate_ramp = 0.0;
    const auto series = gen_city(spec, c);
    const auto sg = stft(bin_daily(series));
    const auto low = band_growth(sg, kLowBandLo, kLowBandHi, Band::Low);
    CHECK(std::abs(low.growth_per_year) < 4.0 * low.stderr_per_year);
  }

  SUBCASE("ramping") {
    spec.rate_ramp = 2.0; // rate triples across the span
    const auto series = gen_city(spec, c);
    const auto sg = stft(bin_daily(series));
    const auto low = band_growth(sg, kLowBandLo, kLowBandHi, Band::Low);
    CHECK(low.growth_per_year > 2.0 * low.stderr_per_year);
  }
}

TEST_CASE("band growth input validation") {
  const auto spec = stft(make_series(std::vector<double>(4678, 1.0)));
  CHECK_THROWS_AS(band_growth(spec, 0.4, 0.7), std::invalid_argument); // beyond Nyquist
  CHECK_THROWS_AS(band_growth(spec, 0.2, 0.1), std::invalid_argument);

  const auto two_frames = stft(make_series(std::vector<double>(250, 1.0)));
  CHECK(two_frames.magnitudes_sq.size() == 2);
  CHECK_THROWS_AS(band_growth(two_frames, kLowBandLo, kLowBandHi), insufficient_data);
}
