#pragma once

#include <cstdint>
#include <vector>

#include "eventpulse/types.hpp"

namespace eventpulse {

// Next-event density under the plug-in ML model: (1/mu) exp(-x/mu).
double ml_predictive(double x_next, double mu);

// Conditional normalized maximum likelihood density for the next
// observation after n exponential observations with sample mean mu:
//   n^(n+1) mu^n / (n mu + x)^(n+1)
// evaluated as (1/mu) (1 + x/(n mu))^-(n+1) so it stays finite for large n.
double cnml_predictive(double x_next, double mu, std::size_t n);

double predictive_pdf(double x_next, const PredictiveDensity& d);
double predictive_cdf(double x, const PredictiveDensity& d);

// Inverse CDF for q in (0, 1). ML: -mu ln(1-q). CNML: n mu ((1-q)^(-1/n) - 1).
double quantile_next(double q, const PredictiveDensity& d);

// Differential entropy of the exponential distribution, 1 + ln(mu) nats —
// the maximum over all mean-mu distributions on [0, inf).
double exponential_entropy(double mu);

// Information loss in nats of modeling exponential(mu_true) data with
// exponential(mu_model): ln(mu_model/mu_true) + mu_true/mu_model - 1.
double kl_exponential(double mu_true, double mu_model);

// Histogram estimate of D(P || exponential(mu_model)) in nats. Equal-width
// bins over [0, max sample]; bin mass of the model is its exact integral
// over the bin (no renormalization for the tail beyond the last sample);
// empty bins contribute zero (0 log 0 = 0). Needs >= 50 samples, >= 5 bins.
double kl_empirical(const std::vector<double>& samples, double mu_model,
                    std::size_t bins = 32);

inline double nats_to_bits(double nats) { return nats * 1.4426950408889634; }

} // namespace eventpulse
