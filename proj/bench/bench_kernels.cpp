// Parallel kernels vs their serial references: nearest-city clustering
// (grid index + OpenMP against the exhaustive scan) and the STFT (radix-2
// FFT + OpenMP frames against the direct DFT).
#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "eventpulse/distfit.hpp"
#include "eventpulse/ingest.hpp"
#include "eventpulse/rng.hpp"
#include "eventpulse/spectral.hpp"
#include "eventpulse/synth.hpp"

using namespace eventpulse;

namespace {

std::vector<City> make_gazetteer(std::size_t n) {
  SplitMix64 rng(1);
  std::vector<City> cities;
  cities.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    City c;
    c.id = "g" + std::to_string(100000 + i);
    c.lat = rng.next_double() * 170.0 - 85.0;
    c.lon = rng.next_double() * 360.0 - 180.0;
    cities.push_back(std::move(c));
  }
  return cities;
}

std::vector<EventRecord> make_events(std::size_t n) {
  SplitMix64 rng(2);
  std::vector<EventRecord> events;
  events.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    EventRecord ev;
    ev.day = static_cast<std::int64_t>(rng.next_u64() % 4677);
    ev.lat = rng.next_double() * 170.0 - 85.0;
    ev.lon = rng.next_double() * 360.0 - 180.0;
    ev.deaths = static_cast<std::int64_t>(rng.next_u64() % 10);
    events.push_back(ev);
  }
  return events;
}

void bm_cluster_grid(benchmark::State& state) {
  const auto cities = make_gazetteer(7000);
  const auto events = make_events(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto result = cluster_to_cities(events, cities);
    benchmark::DoNotOptimize(result);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void bm_cluster_bruteforce(benchmark::State& state) {
  const auto cities = make_gazetteer(7000);
  const auto events = make_events(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto result = cluster_to_cities_bruteforce(events, cities);
    benchmark::DoNotOptimize(result);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

DailySeries make_daily(std::size_t days) {
  SplitMix64 rng(3);
  DailySeries s;
  s.counts.resize(days);
  for (auto& c : s.counts) c = std::floor(rng.next_double() * 4.0);
  return s;
}

void bm_stft_fft(benchmark::State& state) {
  const auto series = make_daily(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto spec = stft(series);
    benchmark::DoNotOptimize(spec);
  }
}

void bm_stft_reference(benchmark::State& state) {
  const auto series = make_daily(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto spec = stft_reference(series);
    benchmark::DoNotOptimize(spec);
  }
}

void bm_power_law_fit(benchmark::State& state) {
  SplitMix64 rng(4);
  const PowerLawSampler sampler(2.5, 1);
  std::vector<std::int64_t> samples(static_cast<std::size_t>(state.range(0)));
  for (auto& x : samples) x = sampler.draw(rng);
  for (auto _ : state) {
    auto fit = fit_power_law(samples);
    benchmark::DoNotOptimize(fit);
  }
}

} // namespace

BENCHMARK(bm_cluster_grid)->Arg(5000)->Arg(30000)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_cluster_bruteforce)->Arg(5000)->Arg(30000)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_stft_fft)->Arg(4678)->Arg(50000)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_stft_reference)->Arg(4678)->Arg(50000)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_power_law_fit)->Arg(10000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
