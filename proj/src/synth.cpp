#include "eventpulse/synth.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "eventpulse/ingest.hpp"
#include "eventpulse/zeta.hpp"

namespace eventpulse {

double power_law_pmf(std::int64_t x, double alpha, std::int64_t x_min) {
  if (x < x_min) return 0.0;
  return std::pow(static_cast<double>(x), -alpha) /
         hurwitz_zeta(alpha, static_cast<double>(x_min));
}

PowerLawSampler::PowerLawSampler(double alpha, std::int64_t x_min, std::size_t table_size)
    : alpha_(alpha), x_min_(x_min) {
  if (!(alpha > 1.0)) throw std::invalid_argument("PowerLawSampler: alpha must be > 1");
  if (x_min < 1) throw std::invalid_argument("PowerLawSampler: x_min must be >= 1");
  if (table_size < 1) throw std::invalid_argument("PowerLawSampler: empty table");
  zeta_xmin_ = hurwitz_zeta(alpha, static_cast<double>(x_min));
  // CDF by survival differences, so the table and the analytic tail agree
  // on the same zeta-valued boundaries.
  cdf_.resize(table_size);
  for (std::size_t i = 0; i < table_size; ++i) {
    const double x_next = static_cast<double>(x_min + static_cast<std::int64_t>(i) + 1);
    cdf_[i] = 1.0 - hurwitz_zeta(alpha, x_next) / zeta_xmin_;
  }
}

std::int64_t PowerLawSampler::draw(SplitMix64& rng) const {
  const double u = rng.next_double();
  if (u < cdf_.back()) {
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    return x_min_ + static_cast<std::int64_t>(it - cdf_.begin());
  }

  // Tail: smallest x with survival S(x+1) = zeta(alpha, x+1)/zeta(alpha,
  // x_min) <= 1-u. Start from the asymptotic inverse and walk to the exact
  // bracket; the walk is a couple of steps at most.
  const double s = 1.0 - u;
  const auto cdf_at = [&](double x) {
    return 1.0 - hurwitz_zeta(alpha_, x + 1.0) / zeta_xmin_;
  };
  const double q0 = std::pow((alpha_ - 1.0) * s * zeta_xmin_, 1.0 / (1.0 - alpha_));
  std::int64_t x = std::max<std::int64_t>(
      x_min_ + static_cast<std::int64_t>(cdf_.size()),
      static_cast<std::int64_t>(q0) - 2);
  while (!(u < cdf_at(static_cast<double>(x)))) ++x;
  while (x > x_min_ && u < cdf_at(static_cast<double>(x - 1))) --x;
  return x;
}

CitySeries gen_city(const GeneratorSpec& spec, const City& city) {
  if (!(spec.mu > 0.0)) throw std::invalid_argument("gen_city: mu must be > 0");
  if (spec.span_days < 1) throw std::invalid_argument("gen_city: span_days must be >= 1");
  if (spec.rate_ramp < 0.0) throw std::invalid_argument("gen_city: rate_ramp must be >= 0");

  SplitMix64 rng(spec.seed);
  const PowerLawSampler deaths(spec.alpha, spec.x_min);

  const double span = static_cast<double>(spec.span_days);
  const double base_rate = 1.0 / spec.mu;
  const double max_rate = base_rate * (1.0 + spec.rate_ramp);

  std::vector<EventRecord> events;
  double t = 0.0;
  for (;;) {
    t += rng.next_exponential(1.0 / max_rate);
    if (t > span) break;
    if (spec.rate_ramp > 0.0) {
      const double rate = base_rate * (1.0 + spec.rate_ramp * t / span);
      if (rng.next_double() * max_rate >= rate) continue; // thinned out
    }
    EventRecord ev;
    ev.day = static_cast<std::int64_t>(std::floor(t));
    ev.lat = city.lat;
    ev.lon = city.lon;
    ev.deaths = deaths.draw(rng);
    events.push_back(ev);
  }

  if (events.empty()) {
    CitySeries s;
    s.city = city;
    s.span_days = spec.span_days;
    return s;
  }
  return build_city_series(city, std::move(events), spec.span_days);
}

std::vector<CitySeries> gen_fleet(const std::vector<GeneratorSpec>& specs,
                                  const std::vector<City>& cities) {
  if (specs.size() != cities.size()) {
    throw std::invalid_argument("gen_fleet: specs and cities must have equal length");
  }
  std::vector<CitySeries> out(specs.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(specs.size()); ++i) {
    GeneratorSpec spec = specs[i];
    spec.seed += static_cast<std::uint64_t>(i);
    out[i] = gen_city(spec, cities[i]);
  }
  return out;
}

} // namespace eventpulse
