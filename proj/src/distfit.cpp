#include "eventpulse/distfit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "eventpulse/errors.hpp"
#include "eventpulse/zeta.hpp"

namespace eventpulse {

namespace {

constexpr double kCiFactor = 1.96;
constexpr double kAlphaLo = 1.0 + 1e-9;
constexpr double kAlphaHi = 6.0;
constexpr double kAlphaTol = 1e-6;
constexpr std::size_t kMinTailSize = 8;

// Golden-section maximization of a unimodal function on [lo, hi].
template <typename F>
double golden_max(F f, double lo, double hi, double tol) {
  const double invphi = 0.6180339887498949;
  double c = hi - invphi * (hi - lo);
  double d = lo + invphi * (hi - lo);
  double fc = f(c);
  double fd = f(d);
  while (hi - lo > tol) {
    if (fc > fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - invphi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + invphi * (hi - lo);
      fd = f(d);
    }
  }
  return 0.5 * (lo + hi);
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

} // namespace

ExponentialFit fit_exponential(const std::vector<double>& samples) {
  if (samples.size() < 2) throw insufficient_data("fit_exponential: need at least 2 samples");
  bool any_positive = false;
  for (double x : samples) {
    if (x < 0.0 || !std::isfinite(x)) {
      throw std::invalid_argument("fit_exponential: samples must be non-negative");
    }
    any_positive |= x > 0.0;
  }
  if (!any_positive) throw insufficient_data("fit_exponential: degenerate sample (all zero)");

  ExponentialFit fit;
  fit.n = samples.size();
  fit.mu_hat = mean_of(samples);
  const double shift = kCiFactor / std::sqrt(static_cast<double>(fit.n));
  fit.ci_lower = fit.mu_hat / (1.0 + shift);
  fit.ci_upper = fit.n <= 4 ? kInf : fit.mu_hat / (1.0 - shift);
  return fit;
}

double exponential_pdf(double t, double mu) {
  if (!(t >= 0.0)) throw std::invalid_argument("exponential_pdf: t must be >= 0");
  if (!(mu > 0.0)) throw std::invalid_argument("exponential_pdf: mu must be > 0");
  return std::exp(-t / mu) / mu;
}

PowerLawFit fit_power_law(const std::vector<std::int64_t>& samples) {
  std::vector<std::int64_t> data;
  data.reserve(samples.size());
  for (std::int64_t x : samples) {
    if (x >= 1) data.push_back(x);
  }
  if (data.size() < 10) {
    throw insufficient_data("fit_power_law: need at least 10 samples >= 1");
  }
  std::sort(data.begin(), data.end());
  if (data.front() == data.back()) {
    throw insufficient_data("fit_power_law: no tail variation");
  }

  // Unique values with counts, plus suffix sums of counts and log(x).
  std::vector<std::int64_t> uniq;
  std::vector<std::size_t> count;
  for (std::int64_t x : data) {
    if (uniq.empty() || uniq.back() != x) {
      uniq.push_back(x);
      count.push_back(0);
    }
    ++count.back();
  }
  const std::size_t u = uniq.size();
  std::vector<std::size_t> tail_count(u + 1, 0);
  std::vector<double> tail_logsum(u + 1, 0.0);
  for (std::size_t i = u; i-- > 0;) {
    tail_count[i] = tail_count[i + 1] + count[i];
    tail_logsum[i] = tail_logsum[i + 1] +
                     static_cast<double>(count[i]) * std::log(static_cast<double>(uniq[i]));
  }

  // Candidate x_min values: unique values whose tail keeps enough points
  // and still varies.
  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < u; ++i) {
    if (tail_count[i] >= kMinTailSize && i + 1 < u) candidates.push_back(i);
  }
  // i = 0 always qualifies: the full sample has >= 10 points and varies.

  std::vector<PowerLawFit> fits(candidates.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t ci = 0; ci < static_cast<std::int64_t>(candidates.size()); ++ci) {
    const std::size_t i0 = candidates[ci];
    const double xm = static_cast<double>(uniq[i0]);
    const double n_tail = static_cast<double>(tail_count[i0]);
    const double logsum = tail_logsum[i0];

    const auto loglik = [&](double alpha) {
      return -n_tail * std::log(hurwitz_zeta(alpha, xm)) - alpha * logsum;
    };
    const double alpha = golden_max(loglik, kAlphaLo, kAlphaHi, kAlphaTol);

    // KS distance between the empirical tail CDF and the fitted CDF,
    // checked on both sides of each step.
    const double z = hurwitz_zeta(alpha, xm);
    double ks = 0.0;
    std::size_t below = 0; // tail observations strictly below uniq[i]
    for (std::size_t i = i0; i < u; ++i) {
      const double x = static_cast<double>(uniq[i]);
      const double model_before = 1.0 - hurwitz_zeta(alpha, x) / z;
      const double model_at = 1.0 - hurwitz_zeta(alpha, x + 1.0) / z;
      ks = std::max(ks, std::abs(static_cast<double>(below) / n_tail - model_before));
      below += count[i];
      ks = std::max(ks, std::abs(static_cast<double>(below) / n_tail - model_at));
    }

    fits[ci] = PowerLawFit{alpha, uniq[i0], tail_count[i0], ks};
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i < fits.size(); ++i) {
    if (fits[i].ks_distance < fits[best].ks_distance) best = i;
  }
  return fits[best];
}

double adjusted_r_squared(const std::vector<double>& y,
                          const std::vector<double>& y_hat, std::size_t v) {
  const std::size_t k = y.size();
  if (y_hat.size() != k) {
    throw std::invalid_argument("adjusted_r_squared: length mismatch");
  }
  if (k <= v + 1) throw insufficient_data("adjusted_r_squared: need K > V + 1");

  double ybar = 0.0;
  for (double yi : y) ybar += yi;
  ybar /= static_cast<double>(k);

  double sse = 0.0;
  double tss = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double e = y[i] - y_hat[i];
    sse += e * e;
    const double d = y[i] - ybar;
    tss += d * d;
  }
  if (tss <= 0.0) throw insufficient_data("adjusted_r_squared: zero variance in y");

  const double r2 = 1.0 - sse / tss;
  return 1.0 - (1.0 - r2) * (static_cast<double>(k) - 1.0) /
                   (static_cast<double>(k) - static_cast<double>(v) - 1.0);
}

RegressionSummary linear_regression(const std::vector<double>& x,
                                    const std::vector<double>& y) {
  const std::size_t k = x.size();
  if (y.size() != k) throw std::invalid_argument("linear_regression: length mismatch");
  if (k < 3) throw insufficient_data("linear_regression: need at least 3 points");

  const double xbar = mean_of(x);
  const double ybar = mean_of(y);
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    sxx += (x[i] - xbar) * (x[i] - xbar);
    sxy += (x[i] - xbar) * (y[i] - ybar);
  }
  if (sxx <= 0.0) throw insufficient_data("linear_regression: zero variance in x");

  RegressionSummary s;
  s.slope = sxy / sxx;
  s.intercept = ybar - s.slope * xbar;
  s.k = k;
  s.v = 1;
  std::vector<double> y_hat(k);
  for (std::size_t i = 0; i < k; ++i) y_hat[i] = s.intercept + s.slope * x[i];
  s.adj_r2 = adjusted_r_squared(y, y_hat, 1);
  return s;
}

RegressionSummary interval_attack_regression(const std::vector<CitySeries>& series) {
  if (series.size() < 3) {
    throw insufficient_data("interval_attack_regression: need at least 3 cities");
  }
  std::vector<double> x;
  std::vector<double> y;
  x.reserve(series.size());
  y.reserve(series.size());
  for (const auto& s : series) {
    std::vector<double> intervals(s.intervals.begin(), s.intervals.end());
    (void)fit_exponential(intervals); // validates the per-city fit
    double sum = 0.0;
    for (double t : intervals) sum += t;
    const double a = static_cast<double>(s.attack_count);
    y.push_back(sum / a);
    x.push_back(static_cast<double>(s.span_days) / a);
  }
  return linear_regression(x, y);
}

RegressionSummary population_correlation(const std::vector<CitySeries>& series) {
  std::vector<double> x;
  std::vector<double> y;
  for (const auto& s : series) {
    if (s.city.population <= 0) continue;
    x.push_back(static_cast<double>(s.city.population));
    y.push_back(static_cast<double>(s.attack_count));
  }
  if (x.size() < 3) {
    throw insufficient_data("population_correlation: need at least 3 cities with population > 0");
  }
  return linear_regression(x, y);
}

} // namespace eventpulse
