#include "eventpulse/predict.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "eventpulse/errors.hpp"

namespace eventpulse {

namespace {

void check_domain(double x_next, double mu) {
  if (!(x_next >= 0.0)) throw std::invalid_argument("predictive: x_next must be >= 0");
  if (!(mu > 0.0)) throw std::invalid_argument("predictive: mu must be > 0");
}

} // namespace

double ml_predictive(double x_next, double mu) {
  check_domain(x_next, mu);
  return std::exp(-x_next / mu) / mu;
}

double cnml_predictive(double x_next, double mu, std::size_t n) {
  check_domain(x_next, mu);
  if (n < 1) throw std::invalid_argument("cnml_predictive: n must be >= 1");
  const double nd = static_cast<double>(n);
  return std::exp(-(nd + 1.0) * std::log1p(x_next / (nd * mu))) / mu;
}

double predictive_pdf(double x_next, const PredictiveDensity& d) {
  return d.mode == PredictiveMode::ML ? ml_predictive(x_next, d.mu)
                                      : cnml_predictive(x_next, d.mu, d.n);
}

double predictive_cdf(double x, const PredictiveDensity& d) {
  check_domain(x, d.mu);
  if (d.mode == PredictiveMode::ML) {
    return -std::expm1(-x / d.mu);
  }
  if (d.n < 1) throw std::invalid_argument("predictive_cdf: n must be >= 1");
  const double nd = static_cast<double>(d.n);
  return -std::expm1(-nd * std::log1p(x / (nd * d.mu)));
}

double quantile_next(double q, const PredictiveDensity& d) {
  if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("quantile_next: q must be in (0,1)");
  if (!(d.mu > 0.0)) throw std::invalid_argument("quantile_next: mu must be > 0");
  if (d.mode == PredictiveMode::ML) {
    return -d.mu * std::log1p(-q);
  }
  if (d.n < 1) throw std::invalid_argument("quantile_next: n must be >= 1");
  const double nd = static_cast<double>(d.n);
  // (1-q)^(-1/n) - 1 via expm1 so the large-n limit degrades gracefully.
  return nd * d.mu * std::expm1(-std::log1p(-q) / nd);
}

double exponential_entropy(double mu) {
  if (!(mu > 0.0)) throw std::invalid_argument("exponential_entropy: mu must be > 0");
  return 1.0 + std::log(mu);
}

double kl_exponential(double mu_true, double mu_model) {
  if (!(mu_true > 0.0) || !(mu_model > 0.0)) {
    throw std::invalid_argument("kl_exponential: means must be > 0");
  }
  return std::log(mu_model / mu_true) + mu_true / mu_model - 1.0;
}

double kl_empirical(const std::vector<double>& samples, double mu_model,
                    std::size_t bins) {
  if (samples.size() < 50) throw insufficient_data("kl_empirical: need at least 50 samples");
  if (bins < 5) throw std::invalid_argument("kl_empirical: need at least 5 bins");
  if (!(mu_model > 0.0)) throw std::invalid_argument("kl_empirical: mu_model must be > 0");

  double max = 0.0;
  for (double x : samples) {
    if (!(x >= 0.0)) throw std::invalid_argument("kl_empirical: samples must be >= 0");
    max = std::max(max, x);
  }
  if (max <= 0.0) throw insufficient_data("kl_empirical: degenerate sample (all zero)");

  const double width = max / static_cast<double>(bins);
  std::vector<std::size_t> counts(bins, 0);
  for (double x : samples) {
    const std::size_t b =
        std::min(bins - 1, static_cast<std::size_t>(std::floor(x / width)));
    ++counts[b];
  }

  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t b = 0; b < bins; ++b) {
    if (counts[b] == 0) continue;
    const double p = static_cast<double>(counts[b]) / n;
    const double lo = width * static_cast<double>(b);
    const double hi = width * static_cast<double>(b + 1);
    const double q = std::exp(-lo / mu_model) - std::exp(-hi / mu_model);
    d += p * std::log(p / q);
  }
  return d;
}

} // namespace eventpulse
