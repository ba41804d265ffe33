#pragma once

#include <cstdint>
#include <vector>

#include "eventpulse/rng.hpp"
#include "eventpulse/types.hpp"

namespace eventpulse {

// p(x) = x^-alpha / zeta(alpha, x_min) for integers x >= x_min.
double power_law_pmf(std::int64_t x, double alpha, std::int64_t x_min);

// Inverse-CDF sampler for the discrete power law. Probabilities up to
// x_min + 10^5 come from a precomputed CDF table; beyond that the draw is
// resolved analytically from the Hurwitz-zeta survival function, so the
// total sampling error stays below 1e-6.
class PowerLawSampler {
 public:
  PowerLawSampler(double alpha, std::int64_t x_min, std::size_t table_size = 100000);

  std::int64_t draw(SplitMix64& rng) const;

 private:
  double alpha_;
  std::int64_t x_min_;
  double zeta_xmin_;
  std::vector<double> cdf_; // cdf_[i] = P(X <= x_min + i)
};

// Generates one city's event series: inter-event gaps exponential(mu)
// (inhomogeneous thinning when rate_ramp > 0, with the rate scaling by
// (1 + rate_ramp * t/span) across the span), arrival times floored to
// integer days, deaths drawn from the discrete power law. Events past the
// span are dropped. Pure function of the spec: identical spec, identical
// series.
CitySeries gen_city(const GeneratorSpec& spec, const City& city);

// Independent per-city streams; city i uses specs[i] with seed + i.
std::vector<CitySeries> gen_fleet(const std::vector<GeneratorSpec>& specs,
                                  const std::vector<City>& cities);

} // namespace eventpulse
