#pragma once

#include <cstdint>
#include <vector>

#include "eventpulse/types.hpp"

namespace eventpulse {

// ML fit of an exponential distribution: mu_hat is the sample mean, with
// normal-approximation confidence bounds
//   upper = mu_hat / (1 - 1.96/sqrt(n)),  lower = mu_hat / (1 + 1.96/sqrt(n)).
// For n <= 4 the upper bound is reported as +infinity. Throws
// insufficient_data on n < 2 or an all-zero sample, std::invalid_argument
// on negative samples.
ExponentialFit fit_exponential(const std::vector<double>& samples);

// (1/mu) * exp(-t/mu) for t >= 0, mu > 0.
double exponential_pdf(double t, double mu);

// Discrete power-law fit p(x) = x^-alpha / zeta(alpha, x_min), x >= x_min.
// Values below 1 are dropped first. For each candidate x_min (unique sample
// values whose tail holds at least 8 points), alpha is the discrete MLE
// found by golden-section search on (1, 6] to 1e-6; the returned x_min
// minimizes the Kolmogorov-Smirnov distance between the tail data and the
// fitted model. Throws insufficient_data when fewer than 10 usable samples
// remain or all samples are identical.
PowerLawFit fit_power_law(const std::vector<std::int64_t>& samples);

// 1 - (1 - R^2) * (K-1)/(K-V-1) with R^2 = 1 - SSE/TSS.
double adjusted_r_squared(const std::vector<double>& y,
                          const std::vector<double>& y_hat, std::size_t v);

// Ordinary least squares of y on x with adjusted R^2 (v = 1).
RegressionSummary linear_regression(const std::vector<double>& x,
                                    const std::vector<double>& y);

// Cross-city regression of the per-city interval parameter against span
// per attack. Per city: y = (sum of intervals) / attack_count (the
// attack-count denominator, so cities whose intervals tile the span give
// y = x exactly), x = span_days / attack_count. Needs >= 3 cities, each
// with a valid exponential interval fit.
RegressionSummary interval_attack_regression(const std::vector<CitySeries>& series);

// Regression of attack_count on population over cities with population > 0.
// The adjusted R^2 is the interesting output: near zero means attacks are
// unexplained by city size.
RegressionSummary population_correlation(const std::vector<CitySeries>& series);

} // namespace eventpulse
